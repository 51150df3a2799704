//! Closed-form torsion, the normalized sequence `log |Tor| / (2N)^2` and its
//! squeeze bounds.
//!
//! For an odd component `(a, b)`,
//!
//! ```text
//! log |Tor| = 2N log 2 - sum_{k=1}^{N} [ log 16 + 2 log|sin((2k-1) a pi / 2p)|
//!                                                + 2 log|sin((2k-1) b pi / 2q)| ]
//! ```
//!
//! and `lo(N) <= log |Tor| / (2N)^2 <= hi(N)` with
//! `lo = -log 2 / 2N` and `hi = lo - log(sin(pi/2p) sin(pi/2q)) / 2N`.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{Component, TorusKnot};
use crate::scalar::{LogComplex, NeumaierSum};
use crate::sl2::Sl2Rep;
use crate::twisted::{
    torsion_generic_adaptive, torsion_structured_adaptive, Adaptive, PrecisionPolicy,
};

/// Largest `|log_abs|` for which the linear value is materialized.
pub const LINEAR_LIMIT: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[serde(rename = "closed")]
    ClosedForm,
    Generic,
    Structured,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed",
            Method::Generic => "generic",
            Method::Structured => "structured",
        })
    }
}

/// One torsion value at dimension `2N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionResult {
    pub n: usize,
    pub dim: usize,
    /// The value itself, when `|log_abs| < LINEAR_LIMIT`.
    pub value: Option<Complex64>,
    pub log_abs: f64,
    pub normalized: f64,
    pub method: Method,
    /// Working precision of the determinant routes; 53 for the closed form.
    pub bits: u32,
}

impl TorsionResult {
    pub fn from_log(n: usize, value: LogComplex, method: Method, bits: u32) -> Self {
        let dim = 2 * n;
        let log_abs = value.log_abs;
        TorsionResult {
            n,
            dim,
            value: if log_abs.abs() < LINEAR_LIMIT {
                value.to_c64()
            } else {
                None
            },
            log_abs,
            normalized: log_abs / (dim * dim) as f64,
            method,
            bits,
        }
    }

    pub fn log_value(&self) -> LogComplex {
        match self.value {
            Some(z) => LogComplex::from_polar(self.log_abs, z.arg()),
            None => LogComplex::from_polar(self.log_abs, 0.0),
        }
    }

    /// `|self - other| / |other|`.
    pub fn relative_difference(&self, other: &TorsionResult) -> f64 {
        self.log_value().relative_difference(other.log_value())
    }
}

/// `ln |sin(pi m / (2 d))|` with `m` reduced exactly first.
pub fn ln_abs_sin_pi_over(m: i64, d: i64) -> f64 {
    let period = 2 * d;
    let r = m.rem_euclid(period);
    let r = r.min(period - r);
    (PI * r as f64 / period as f64).sin().ln()
}

fn closed_form_term(a: i64, p: i64, b: i64, q: i64, k: i64) -> f64 {
    let m = 2 * k - 1;
    (16f64).ln() + 2.0 * ln_abs_sin_pi_over(m * a, p) + 2.0 * ln_abs_sin_pi_over(m * b, q)
}

/// Closed-form torsion of an odd component.
pub fn torsion_closed_form(component: &Component, n: usize) -> Result<TorsionResult> {
    component.require_odd()?;
    check_n(n)?;
    let mut seq = NormalizedSequence::new(component)?;
    let mut last = None;
    for _ in 0..n {
        last = seq.next();
    }
    Ok(last.expect("n >= 1"))
}

/// The closed form evaluated directly in linear space, when representable.
pub fn torsion_closed_form_linear(component: &Component, n: usize) -> Result<Option<f64>> {
    component.require_odd()?;
    check_n(n)?;
    let k = component.knot();
    let (a, b, p, q) = (
        i64::from(component.a()),
        i64::from(component.b()),
        k.p(),
        k.q(),
    );
    let mut value = 2f64.powi(2 * n as i32);
    for j in 1..=n as i64 {
        let m = 2 * j - 1;
        let sa = (PI * (m * a) as f64 / (2 * p) as f64).sin();
        let sb = (PI * (m * b) as f64 / (2 * q) as f64).sin();
        value /= 16.0 * sa * sa * sb * sb;
    }
    Ok(if value.is_finite() && value > 0.0 {
        Some(value)
    } else {
        None
    })
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::OutOfRange {
            name: "N",
            value: 0,
            expected: "N >= 1".into(),
        })
    } else {
        Ok(())
    }
}

/// Closed-form results for `N = 1, 2, ...`, in constant memory.
#[derive(Clone, Debug)]
pub struct NormalizedSequence {
    a: i64,
    b: i64,
    p: i64,
    q: i64,
    n: usize,
    sum: NeumaierSum,
}

impl NormalizedSequence {
    pub fn new(component: &Component) -> Result<Self> {
        component.require_odd()?;
        let k = component.knot();
        Ok(NormalizedSequence {
            a: i64::from(component.a()),
            b: i64::from(component.b()),
            p: k.p(),
            q: k.q(),
            n: 0,
            sum: NeumaierSum::default(),
        })
    }
}

impl Iterator for NormalizedSequence {
    type Item = TorsionResult;

    fn next(&mut self) -> Option<TorsionResult> {
        self.n += 1;
        let k = self.n as i64;
        self.sum
            .add(-closed_form_term(self.a, self.p, self.b, self.q, k));
        let log_abs = 2.0 * self.n as f64 * LN_2 + self.sum.total();
        Some(TorsionResult::from_log(
            self.n,
            LogComplex::from_polar(log_abs, 0.0),
            Method::ClosedForm,
            53,
        ))
    }
}

/// Closed-form results for `N = 1..=n_max`.
pub fn normalized_sequence(component: &Component, n_max: usize) -> Result<Vec<TorsionResult>> {
    check_n(n_max)?;
    Ok(NormalizedSequence::new(component)?.take(n_max).collect())
}

/// `(lo(N), hi(N))`.
pub fn squeeze_bounds(knot: &TorusKnot, n: usize) -> (f64, f64) {
    let two_n = 2.0 * n as f64;
    let lo = -LN_2 / two_n;
    let hi = lo - ln_sine_floor(knot) / two_n;
    (lo, hi)
}

/// `ln(sin(pi/2p) sin(pi/2q))`.
fn ln_sine_floor(knot: &TorusKnot) -> f64 {
    ln_abs_sin_pi_over(1, knot.p()) + ln_abs_sin_pi_over(1, knot.q())
}

/// `(ln 2 + |ln(sin(pi/2p) sin(pi/2q))|) / 2N`, bounding `|normalized(N)|`.
pub fn magnitude_bound(knot: &TorusKnot, n: usize) -> f64 {
    (LN_2 + ln_sine_floor(knot).abs()) / (2.0 * n as f64)
}

/// Outcome of [`verify_convergence`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub n_max: usize,
    pub passed: bool,
    /// Smallest `min(normalized - lo, hi - normalized)` over all `N`.
    pub worst_margin: f64,
    pub worst_n: usize,
    pub last_normalized: f64,
    /// [`magnitude_bound`] at `n_max`.
    pub last_bound: f64,
}

/// Slack for float rounding in the squeeze comparison.
pub const SQUEEZE_SLACK: f64 = 1e-12;

/// Check `lo(N) <= normalized(N) <= hi(N)` for `N = 1..=n_max` and
/// `|normalized(n_max)| <= magnitude_bound(n_max)`.
pub fn verify_convergence(component: &Component, n_max: usize) -> Result<ConvergenceReport> {
    verify_rows(
        component,
        NormalizedSequence::new(component)?.take(n_max),
        n_max,
    )
}

fn verify_rows(
    component: &Component,
    rows: impl Iterator<Item = TorsionResult>,
    n_max: usize,
) -> Result<ConvergenceReport> {
    check_n(n_max)?;
    let knot = component.knot();
    let mut worst_margin = f64::INFINITY;
    let mut worst_n = 0;
    let mut last = 0.0;
    for r in rows {
        let (lo, hi) = squeeze_bounds(knot, r.n);
        let margin = (r.normalized - lo).min(hi - r.normalized);
        if margin < -SQUEEZE_SLACK {
            return Err(Error::BoundViolated {
                n: r.n,
                value: r.normalized,
                lo,
                hi,
            });
        }
        if margin < worst_margin {
            worst_margin = margin;
            worst_n = r.n;
        }
        last = r.normalized;
    }
    let last_bound = magnitude_bound(knot, n_max);
    let passed = last.abs() <= last_bound + SQUEEZE_SLACK;
    if !passed {
        let (lo, hi) = squeeze_bounds(knot, n_max);
        return Err(Error::BoundViolated {
            n: n_max,
            value: last,
            lo,
            hi,
        });
    }
    Ok(ConvergenceReport {
        n_max,
        passed,
        worst_margin,
        worst_n,
        last_normalized: last,
        last_bound,
    })
}

/// Torsion of `rep` at dimension `2N` by the chosen method. The determinant
/// routes run at an adaptively chosen precision under `policy`.
pub fn torsion(
    rep: &Sl2Rep,
    n: usize,
    method: Method,
    policy: &PrecisionPolicy,
) -> Result<TorsionResult> {
    check_n(n)?;
    let from = |a: Adaptive<LogComplex>| TorsionResult::from_log(n, a.value, method, a.bits);
    match method {
        Method::ClosedForm => torsion_closed_form(rep.component(), n),
        Method::Generic => torsion_generic_adaptive(rep, n, policy).map(from),
        Method::Structured => torsion_structured_adaptive(rep, n, policy).map(from),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(p: i64, q: i64, a: i64, b: i64) -> Component {
        TorusKnot::new(p, q).unwrap().component(a, b).unwrap()
    }

    #[test]
    fn trefoil_values() {
        let c = comp(2, 3, 1, 1);
        let t1 = torsion_closed_form(&c, 1).unwrap();
        let t2 = torsion_closed_form(&c, 2).unwrap();
        assert!((t1.value.unwrap().re - 2.0).abs() < 1e-14);
        assert!((t2.value.unwrap().re - 1.0).abs() < 1e-14);
        assert!((t1.normalized - LN_2 / 4.0).abs() < 1e-15);
        assert_eq!(t1.dim, 2);
    }

    #[test]
    fn linear_path_matches() {
        let c = comp(3, 5, 1, 3);
        for n in [1, 5, 40] {
            let log = torsion_closed_form(&c, n).unwrap().log_abs;
            let lin = torsion_closed_form_linear(&c, n).unwrap().unwrap();
            assert!((lin.ln() - log).abs() <= 1e-10 * log.abs().max(1.0));
        }
    }

    #[test]
    fn exact_reduction() {
        assert!((ln_abs_sin_pi_over(1, 2) - 0.5f64.sqrt().ln()).abs() < 1e-15);
        assert!((ln_abs_sin_pi_over(3, 2) - ln_abs_sin_pi_over(1, 2)).abs() < 1e-15);
        assert!((ln_abs_sin_pi_over(4_000_001, 3) - ln_abs_sin_pi_over(1, 3)).abs() < 1e-15);
        assert_eq!(ln_abs_sin_pi_over(6, 3), f64::NEG_INFINITY);
    }

    #[test]
    fn bounds_at_n1() {
        let k = TorusKnot::new(2, 3).unwrap();
        let (lo, hi) = squeeze_bounds(&k, 1);
        assert!((lo + 0.346574).abs() < 1e-6);
        assert!((hi - 0.173287).abs() < 1e-6);
        let t = torsion_closed_form(&comp(2, 3, 1, 1), 1).unwrap();
        assert!((t.normalized - hi).abs() < 1e-12);
    }

    #[test]
    fn even_components_are_rejected() {
        let c = comp(3, 5, 2, 2);
        assert!(matches!(
            torsion_closed_form(&c, 1),
            Err(Error::WrongParity { .. })
        ));
        assert!(matches!(
            verify_convergence(&c, 5),
            Err(Error::WrongParity { .. })
        ));
    }

    #[test]
    fn convergence_report() {
        let r = verify_convergence(&comp(2, 3, 1, 1), 1000).unwrap();
        assert!(r.passed);
        assert!(r.last_normalized.abs() < 1e-3);
        assert!(r.worst_margin >= -SQUEEZE_SLACK);
    }

    #[test]
    fn injected_violation_is_reported() {
        let c = comp(2, 3, 1, 1);
        let rows = normalized_sequence(&c, 3)
            .unwrap()
            .into_iter()
            .map(|mut r| {
                if r.n == 2 {
                    r.normalized = 1.0;
                }
                r
            });
        assert!(matches!(
            verify_rows(&c, rows, 3),
            Err(Error::BoundViolated { n: 2, .. })
        ));
    }
}
