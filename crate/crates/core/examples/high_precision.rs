//! How the working precision is chosen and checked. The matrices of
//! sigma_2N(rho) grow like cond(conjugator)^(2N), so double precision gives
//! up after a few N; the adaptive drivers start from an estimate and verify
//! with a second run.

use num_complex::Complex64;
use torsionknot::asymptotics::torsion_closed_form;
use torsionknot::knot::TorusKnot;
use torsionknot::scalar::MpComplex;
use torsionknot::sl2::Sl2Rep;
use torsionknot::twisted::{
    build_complex, build_complex_at, conditioning_bits, estimated_bits, torsion_generic,
    torsion_generic_adaptive, PrecisionPolicy, TorsionValue,
};

fn main() -> torsionknot::Result<()> {
    let c = TorusKnot::new(3, 7)?.component(1, 5)?;
    let rep = Sl2Rep::build(&c, Complex64::new(2.0, 0.0))?;
    for n in [2, 4, 8, 16, 32] {
        let exact = torsion_closed_form(&c, n)?.log_value();
        let double = build_complex(&rep, n).and_then(|cx| torsion_generic(&cx));
        let fixed = build_complex_at::<MpComplex>(&rep, n, 256).and_then(|cx| torsion_generic(&cx));
        let adaptive = torsion_generic_adaptive(&rep, n, &PrecisionPolicy::default())?;
        let show = |r: torsionknot::Result<TorsionValue>| match r {
            Ok(v) => format!("{:.1e}", v.value.relative_difference(exact)),
            Err(e) => format!("error: {e}"),
        };
        println!(
            "N = {n}: lost bits ~ {:.0}, estimate {} bits",
            conditioning_bits(&rep, n),
            estimated_bits(&rep, n)
        );
        println!("  53 bits:  {}", show(double));
        println!("  256 bits: {}", show(fixed));
        println!(
            "  adaptive: {:.1e} at {} bits (runs agree to {:.1e})",
            adaptive.value.relative_difference(exact),
            adaptive.bits,
            adaptive.agreement.unwrap_or(0.0)
        );
    }
    Ok(())
}
