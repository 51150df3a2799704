//! The symmetric powers sigma_n: homomorphism, weights and the Chebyshev
//! character identity.

use num_complex::Complex64;
use torsionknot::sl2::Mat2;
use torsionknot::sympower::{character, sym_power, weights};

fn main() -> torsionknot::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let a = Mat2::new(c(1.0, 0.5), c(2.0, 0.0), c(-0.5, 1.0), c(0.0, 0.0));
    let a = a.scale(a.det().sqrt().inv());
    let b = Mat2::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));

    for n in [2, 3, 5, 8] {
        let lhs = sym_power(&(a * b), n)?;
        let rhs = sym_power(&a, n)?.matmul(&sym_power(&b, n)?);
        let err = lhs.sub(&rhs).frobenius() / lhs.frobenius();
        println!(
            "n = {n}: |sigma(AB) - sigma(A) sigma(B)| / |sigma(AB)| = {err:.1e}, det = {:.12}",
            sym_power(&a, n)?.log_det().to_c64().unwrap_or_default()
        );
    }

    // tr sigma_n(A) = U_{n-1}(tr A / 2), with U the Chebyshev polynomials of
    // the second kind.
    let x = a.trace() / 2.0;
    let (mut u0, mut u1) = (c(1.0, 0.0), 2.0 * x);
    for n in 1..=6 {
        println!(
            "n = {n}: weights {:?}, character {:.10}, Chebyshev {:.10}",
            weights(n),
            character(&a, n)?,
            u0
        );
        let u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    Ok(())
}
