//! The normalized log-torsion log|Tor| / (2N)^2 squeezed to zero.

use torsionknot::asymptotics::{
    magnitude_bound, normalized_sequence, squeeze_bounds, verify_convergence,
};
use torsionknot::knot::TorusKnot;

fn main() -> torsionknot::Result<()> {
    for (p, q) in [(2, 3), (3, 5)] {
        let knot = TorusKnot::new(p, q)?;
        for c in knot.odd_components() {
            let rows = normalized_sequence(&c, 2000)?;
            for r in rows
                .iter()
                .filter(|r| [1, 10, 100, 1000, 2000].contains(&r.n))
            {
                let (lo, hi) = squeeze_bounds(&knot, r.n);
                println!(
                    "{c} N = {:4}: {lo:+.3e} <= {:+.3e} <= {hi:+.3e}",
                    r.n, r.normalized
                );
            }
            let report = verify_convergence(&c, 2000)?;
            println!(
                "{c}: worst margin {:.3e} at N = {}, |normalized(2000)| = {:.3e} <= {:.3e}",
                report.worst_margin,
                report.worst_n,
                report.last_normalized.abs(),
                magnitude_bound(&knot, 2000)
            );
        }
    }
    Ok(())
}
