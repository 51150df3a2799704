//! Torsion by the generic base-change algorithm, by the structured
//! determinant formula and by the closed form, side by side.
//!
//! `cargo run --release --example generic_torsion -- 3 7 1 5 16`

use num_complex::Complex64;
use torsionknot::asymptotics::{torsion, Method};
use torsionknot::knot::TorusKnot;
use torsionknot::sl2::Sl2Rep;
use torsionknot::twisted::PrecisionPolicy;

fn main() -> torsionknot::Result<()> {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let (p, q, a, b, n_max) = match args[..] {
        [p, q, a, b, n, ..] => (p, q, a, b, n as usize),
        _ => (2, 5, 1, 3, 12),
    };
    let c = TorusKnot::new(p, q)?.component(a, b)?;
    let policy = PrecisionPolicy::default();
    for t in [
        Complex64::new(-1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(3.0, 1.0),
    ] {
        let rep = Sl2Rep::build(&c, t)?;
        println!("{c}, t = {t}");
        for n in 1..=n_max {
            let closed = torsion(&rep, n, Method::ClosedForm, &policy)?;
            let generic = torsion(&rep, n, Method::Generic, &policy)?;
            let structured = torsion(&rep, n, Method::Structured, &policy)?;
            println!(
                "  N = {n:3}  log|Tor| = {:<20}  generic {:.1e} ({} bits)  structured {:.1e} ({} bits)",
                closed.log_abs,
                generic.relative_difference(&closed),
                generic.bits,
                structured.relative_difference(&closed),
                structured.bits
            );
        }
    }
    Ok(())
}
