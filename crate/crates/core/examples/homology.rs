//! Homology of the twisted complex: acyclic on odd components, not on even
//! ones, with the kernel bound from the eigenvalue-one counts.

use num_complex::Complex64;
use torsionknot::knot::TorusKnot;
use torsionknot::sl2::Sl2Rep;
use torsionknot::twisted::{
    eigenvalue_one_multiplicities, homology_adaptive, kernel_lower_bound, PrecisionPolicy,
};

fn main() -> torsionknot::Result<()> {
    let knot = TorusKnot::new(3, 5)?;
    let policy = PrecisionPolicy::default();
    for c in knot.components() {
        let rep = Sl2Rep::build(&c, Complex64::new(2.0, 0.0))?;
        for n in [1, 2, 4, 8] {
            let h = homology_adaptive(&rep, n, &policy)?;
            let (h2, h1, h0) = h.value.dims();
            print!(
                "{c} N = {n}: (h2, h1, h0) = ({h2}, {h1}, {h0}) at {} bits",
                h.bits
            );
            if let Ok((xi, eta)) = eigenvalue_one_multiplicities(&rep, n) {
                print!(
                    ", xi = {xi}, eta = {eta}, 2N - xi - eta = {}",
                    kernel_lower_bound(&knot, n)
                );
            }
            println!();
        }
    }
    Ok(())
}
