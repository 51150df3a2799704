//! Enumerate the character-variety components of a torus knot.
//!
//! `cargo run --example components -- 3 5`

use torsionknot::knot::TorusKnot;

fn main() -> torsionknot::Result<()> {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let (p, q) = match args[..] {
        [p, q, ..] => (p, q),
        _ => (3, 5),
    };
    let knot = TorusKnot::new(p, q)?;
    println!(
        "{knot}: r = {}, s = {}, {} components",
        knot.r(),
        knot.s(),
        knot.component_count()
    );
    for c in knot.components() {
        println!(
            "  ({}, {})  {:<4}  central sign {:+}  acyclic: {}",
            c.a(),
            c.b(),
            c.parity(),
            c.central_sign(),
            c.is_acyclic()
        );
    }
    Ok(())
}
