//! The closed-form sine product, exact and in log space for N far beyond
//! the range of f64.

use torsionknot::asymptotics::{torsion_closed_form, torsion_closed_form_linear};
use torsionknot::knot::TorusKnot;

fn main() -> torsionknot::Result<()> {
    let trefoil = TorusKnot::new(2, 3)?.component(1, 1)?;
    for n in 1..=6 {
        let r = torsion_closed_form(&trefoil, n)?;
        println!("trefoil N = {n}: Tor = {:?}", r.value);
    }
    let c = TorusKnot::new(3, 5)?.component(1, 3)?;
    for n in [1, 10, 100, 1_000, 100_000, 10_000_000] {
        let r = torsion_closed_form(&c, n)?;
        let linear = torsion_closed_form_linear(&c, n)?;
        println!(
            "{c} N = {n:>8}: log|Tor| = {:<22} normalized = {:<24} linear = {linear:?}",
            r.log_abs, r.normalized
        );
    }
    Ok(())
}
