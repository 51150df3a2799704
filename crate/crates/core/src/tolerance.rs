//! Numerical tolerances shared across the crate.
//!
//! Values stated for double precision scale with the unit roundoff when a
//! computation runs at a wider working precision; see [`relative_at`].

/// Allowed deviation of a determinant from 1 for SL(2,C) inputs.
pub const TAU_DET: f64 = 1e-12;

/// Relative tolerance for identities between 2x2 products.
pub const TAU_REL: f64 = 1e-9;

/// Relative rank threshold at double precision: singular values below
/// `max(rows, cols) * scale * RANK_EPS` count as zero.
pub const RANK_EPS: f64 = 1e-10;

/// A singular value within this factor of the rank threshold is ambiguous.
pub const RANK_AMBIGUITY: f64 = 100.0;

/// Cross-method agreement required between torsion routes.
pub const AGREEMENT: f64 = 1e-8;

/// Largest admissible condition estimate of a base-change determinant at
/// double precision.
pub const MAX_CONDITION: f64 = 1e12;

/// Largest N accepted by the generic base-change route.
pub const MAX_GENERIC_N: usize = 256;

/// Unit roundoff of a binary floating-point format with `bits` of mantissa.
pub fn unit_roundoff(bits: u32) -> f64 {
    (-(bits as f64)).exp2()
}

/// Rescale a tolerance stated for double precision to `bits` of working
/// precision, keeping its ratio to the unit roundoff.
pub fn relative_at(tol: f64, bits: u32) -> f64 {
    tol * unit_roundoff(bits) / unit_roundoff(53)
}

/// Rank threshold factor at `bits` of working precision.
///
/// Equals [`RANK_EPS`] at 53 bits and shrinks like `u^(5/8)` beyond, so the
/// gap between rounding noise (about `u`) and the threshold widens with the
/// precision.
pub fn rank_eps(bits: u32) -> f64 {
    if bits <= 53 {
        RANK_EPS
    } else {
        RANK_EPS * (-(f64::from(bits - 53)) * 0.625).exp2()
    }
}

/// Natural-log form of [`rank_eps`], safe for precisions whose threshold
/// underflows `f64`.
pub fn ln_rank_eps(bits: u32) -> f64 {
    if bits <= 53 {
        RANK_EPS.ln()
    } else {
        RANK_EPS.ln() - f64::from(bits - 53) * 0.625 * std::f64::consts::LN_2
    }
}

/// Natural log of the largest admissible condition estimate at `bits`.
pub fn ln_max_condition(bits: u32) -> f64 {
    MAX_CONDITION.ln() + f64::from(bits.saturating_sub(53)) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_precision_values_match_the_constants() {
        assert_eq!(rank_eps(53), RANK_EPS);
        assert!((ln_rank_eps(53) - RANK_EPS.ln()).abs() < 1e-15);
        assert!((relative_at(TAU_REL, 53) - TAU_REL).abs() < 1e-24);
    }

    #[test]
    fn thresholds_shrink_with_precision() {
        assert!(rank_eps(256) < rank_eps(128));
        assert!(ln_rank_eps(4096) < ln_rank_eps(2048));
        assert!((ln_rank_eps(181) - rank_eps(181).ln()).abs() < 1e-9);
        assert!(ln_max_condition(256) > ln_max_condition(53));
    }
}
