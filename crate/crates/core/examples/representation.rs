//! Build an irreducible SL(2,C) representation of a torus knot group and
//! check it.

use num_complex::Complex64;
use torsionknot::knot::TorusKnot;
use torsionknot::sl2::{Generator, Sl2Rep};

fn main() -> torsionknot::Result<()> {
    let knot = TorusKnot::new(2, 3)?;
    let c = knot.component(1, 1)?;
    let rep = Sl2Rep::build(&c, Complex64::new(2.0, 0.0))?;
    println!("rho(x) = {}", rep.rho_x());
    println!("rho(y) = {}", rep.rho_y());
    println!("rho(x)^2 = {}", rep.power(Generator::X, 2));
    println!("rho(y)^3 = {}", rep.power(Generator::Y, 3));
    println!("relation x^p = y^q holds: {}", rep.check_group_relation());
    println!("irreducible: {}", rep.is_irreducible()?);
    println!("meridian trace {}", rep.meridian_trace());
    let [lo, hi] = rep.excluded_traces();
    println!("excluded traces {lo} and {hi}");

    // A t making the meridian trace hit an excluded value is rejected.
    match Sl2Rep::build(&c, Complex64::new(1e-13, 0.0)) {
        Ok(_) => println!("t = 1e-13 accepted"),
        Err(e) => println!("t = 1e-13 rejected: {e}"),
    }
    Ok(())
}
