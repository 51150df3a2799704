//! The twisted chain complex `C_2 -> C_1 -> C_0` of the two-cell model
//! of a torus knot exterior, with coefficients in `V_{2N}`.
//!
//! With `X = sigma_{2N}(rho(x))` and `Y = sigma_{2N}(rho(y))`:
//!
//! ```text
//! d2 = [ I + X + ... + X^{p-1} ; -(I + Y + ... + Y^{q-1}) ]   (4N x 2N)
//! d1 = [ X - I | Y - I ]                                       (2N x 4N)
//! ```
//!
//! Everything is generic over [`Scalar`]; [`build_complex`] is the double
//! precision entry point and the `*_adaptive` functions pick a working
//! precision on their own and verify the result at a higher one.

use crate::scalar::MpComplex;
use log::{debug, trace};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{Component, Parity, TorusKnot};
use crate::matrix::Matrix;
use crate::scalar::{LogComplex, Scalar};
use crate::sl2::{Generator, Mat2, Sl2Rep};
use crate::sympower::{sym_power_at, sym_power_inverse};
use crate::tolerance::{self, ln_max_condition, ln_rank_eps, RANK_AMBIGUITY, TAU_REL};

/// The twisted complex of one representation at one dimension `2N`.
#[derive(Clone, Debug)]
pub struct TwistedComplex<S = Complex64> {
    n: usize,
    bits: u32,
    rep: Sl2Rep,
    x: Matrix<S>,
    y: Matrix<S>,
    d2: Matrix<S>,
    d1: Matrix<S>,
    chain_residual: f64,
}

impl<S: Scalar> TwistedComplex<S> {
    /// The `N` of `V_{2N}`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `2N`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn rep(&self) -> &Sl2Rep {
        &self.rep
    }

    pub fn knot(&self) -> &TorusKnot {
        self.rep.knot()
    }

    pub fn component(&self) -> &Component {
        self.rep.component()
    }

    pub fn x(&self) -> &Matrix<S> {
        &self.x
    }

    pub fn y(&self) -> &Matrix<S> {
        &self.y
    }

    pub fn d2(&self) -> &Matrix<S> {
        &self.d2
    }

    pub fn d1(&self) -> &Matrix<S> {
        &self.d1
    }

    /// `|d1 d2 v| / (|d1| max(|d1|, |d2|) |v|)` for a fixed probe vector `v`.
    pub fn chain_residual(&self) -> f64 {
        self.chain_residual
    }

    /// Natural log of `max(|d1|, |d2|)` (Frobenius norms), the scale rank
    /// decisions are made against.
    fn ln_joint_scale(&self) -> f64 {
        self.d1.ln_frobenius().max(self.d2.ln_frobenius())
    }

    fn ln_rank_threshold(&self) -> f64 {
        ln_rank_eps(self.bits) + (4.0 * self.n as f64).ln() + self.ln_joint_scale()
    }
}

/// Build the complex in double precision.
pub fn build_complex(rep: &Sl2Rep, n: usize) -> Result<TwistedComplex<Complex64>> {
    build_complex_at(rep, n, 53)
}

/// Build the complex at `bits` of working precision.
///
/// The generator powers are evaluated from the exact representation data at
/// the working precision, and `I + X + ... + X^{p-1}` is assembled as
/// `sum_i sigma(rho(x)^i)`.
pub fn build_complex_at<S: Scalar>(rep: &Sl2Rep, n: usize, bits: u32) -> Result<TwistedComplex<S>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "N",
            value: 0,
            expected: "N >= 1".into(),
        });
    }
    let dim = 2 * n;
    let knot = rep.knot();
    let (x, sx) = power_sum::<S>(rep, Generator::X, knot.p(), dim, bits);
    let (y, sy) = power_sum::<S>(rep, Generator::Y, knot.q(), dim, bits);
    let id = Matrix::<S>::identity(dim, bits);
    let d2 = sx.vstack(&sy.neg());
    let d1 = x.sub(&id).hstack(&y.sub(&id));
    let chain_residual = freivalds_residual(&d1, &d2);
    let tol = chain_tolerance(bits);
    trace!("chain residual {chain_residual:e} (tolerance {tol:e}) at N = {n}, {bits} bits");
    if !(chain_residual <= tol) {
        return Err(Error::ChainConditionViolated {
            relative: chain_residual,
        });
    }
    Ok(TwistedComplex {
        n,
        bits,
        rep: rep.clone(),
        x,
        y,
        d2,
        d1,
        chain_residual,
    })
}

/// `(sigma(rho(g)), sum_{i < k} sigma(rho(g)^i))`. Since `rho(g)^k` is the
/// central `(-1)^a I`, the power `k - i` is a signed inverse of power `i`.
fn power_sum<S: Scalar>(
    rep: &Sl2Rep,
    g: Generator,
    k: i64,
    dim: usize,
    bits: u32,
) -> (Matrix<S>, Matrix<S>) {
    let odd_central = rep.component().central_sign() < 0 && dim % 2 == 0;
    let mut sum = Matrix::<S>::identity(dim, bits);
    let mut first = None;
    for i in 1..=k / 2 {
        let m = sym_power_at(&rep.power_at::<S>(g, i, bits), dim);
        if 2 * i < k {
            let partner = sym_power_inverse(&m);
            sum = if odd_central {
                sum.sub(&partner)
            } else {
                sum.add(&partner)
            };
        }
        sum = sum.add(&m);
        if i == 1 {
            first = Some(m);
        }
    }
    let first = first.unwrap_or_else(|| sym_power_at(&rep.power_at::<S>(g, 1, bits), dim));
    (first, sum)
}

/// Largest accepted chain residual at `bits`: [`TAU_REL`] at double
/// precision, then shrinking like the square root of the unit roundoff.
pub fn chain_tolerance(bits: u32) -> f64 {
    TAU_REL * (-(f64::from(bits.saturating_sub(53))) / 2.0).exp2()
}

fn freivalds_residual<S: Scalar>(d1: &Matrix<S>, d2: &Matrix<S>) -> f64 {
    let bits = d1.bits();
    let probe: Vec<S> = (0..d2.cols())
        .map(|k| S::exp_i_pi(2 * (k as i64) * 7919 + 1, 4099, bits))
        .collect();
    let r = d1.matvec(&d2.matvec(&probe));
    let ln_d1 = d1.ln_frobenius();
    let ln_scale = ln_d1 + ln_d1.max(d2.ln_frobenius()) + 0.5 * (probe.len() as f64).ln();
    if ln_scale == f64::NEG_INFINITY {
        return 0.0;
    }
    let rm = Matrix::from_fn(r.len(), 1, |i, _| r[i].clone());
    (rm.ln_frobenius() - ln_scale).exp()
}

/// Homology dimensions and the data behind the rank decisions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub h2: usize,
    pub h1: usize,
    pub h0: usize,
    pub rank_d1: usize,
    pub rank_d2: usize,
    /// `ln` of the singular values of `d1`, relative to the joint scale.
    pub ln_singular_d1: Vec<f64>,
    /// `ln` of the singular values of `d2`, relative to the joint scale.
    pub ln_singular_d2: Vec<f64>,
    /// `ln` of the relative rank threshold.
    pub ln_threshold: f64,
    pub bits: u32,
}

impl HomologyReport {
    pub fn is_acyclic(&self) -> bool {
        self.h2 == 0 && self.h1 == 0 && self.h0 == 0
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.h2, self.h1, self.h0)
    }
}

/// Ranks by singular values, thresholded against the joint scale of both
/// boundary maps; a singular value within a factor [`RANK_AMBIGUITY`] of the
/// threshold is an error rather than a guess.
pub fn homology_dimensions<S: Scalar>(cx: &TwistedComplex<S>) -> Result<HomologyReport> {
    let scale = cx.ln_joint_scale();
    let rel = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|s| s - scale).collect() };
    let s1 = rel(cx.d1.ln_singular_values());
    let s2 = rel(cx.d2.ln_singular_values());
    let thr = cx.ln_rank_threshold() - scale;
    let band = RANK_AMBIGUITY.ln();
    for &s in s1.iter().chain(&s2) {
        if (s - thr).abs() < band {
            return Err(Error::RankIndeterminate {
                value: s.exp(),
                threshold: thr.exp(),
            });
        }
    }
    let rank_d1 = s1.iter().filter(|&&s| s > thr).count();
    let rank_d2 = s2.iter().filter(|&&s| s > thr).count();
    let dim = cx.dim();
    Ok(HomologyReport {
        h2: dim - rank_d2,
        h1: 2 * dim - rank_d1 - rank_d2,
        h0: dim - rank_d1,
        rank_d1,
        rank_d2,
        ln_singular_d1: s1,
        ln_singular_d2: s2,
        ln_threshold: thr,
        bits: cx.bits,
    })
}

/// A torsion value from one of the determinant routes.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionValue {
    pub value: LogComplex,
    /// Natural log of the larger condition estimate of the two determinants.
    pub ln_condition: f64,
    /// Columns of `C_1` used as the lift, when the lift is a set of standard
    /// basis vectors.
    pub columns: Vec<usize>,
    pub bits: u32,
}

/// Torsion by the base-change determinants, with the lift chosen by complete
/// pivoting on `d1`.
pub fn torsion_generic<S: Scalar>(cx: &TwistedComplex<S>) -> Result<TorsionValue> {
    let thr = cx.ln_rank_threshold();
    let band = RANK_AMBIGUITY.ln();
    let elim = cx.d1.complete_pivoting();
    if let Some(&p) = elim.ln_pivots.iter().find(|&&p| (p - thr).abs() < band) {
        return Err(Error::RankIndeterminate {
            value: (p - cx.ln_joint_scale()).exp(),
            threshold: (thr - cx.ln_joint_scale()).exp(),
        });
    }
    let rank_d1 = elim.rank_above(thr);
    if rank_d1 < cx.dim() {
        return Err(Error::NotAcyclic {
            rank_d1,
            rank_d2: pivot_rank(&cx.d2, thr),
            dim: cx.dim(),
        });
    }
    let mut columns = elim.columns[..cx.dim()].to_vec();
    columns.sort_unstable();
    torsion_with_columns(cx, &columns)
}

fn pivot_rank<S: Scalar>(m: &Matrix<S>, ln_threshold: f64) -> usize {
    m.complete_pivoting().rank_above(ln_threshold)
}

/// Torsion with the lift `{e_s : s in columns}` of `C_0` into `C_1`.
///
/// `det[d2 | E_S]` reduces to `+-det d2[R, :]`, `R` the rows not in `S`, so
/// both determinants are `2N x 2N`.
pub fn torsion_with_columns<S: Scalar>(
    cx: &TwistedComplex<S>,
    columns: &[usize],
) -> Result<TorsionValue> {
    let dim = cx.dim();
    let mut sorted = columns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != dim || sorted.last().is_some_and(|&c| c >= 2 * dim) {
        return Err(Error::BadParameter(format!(
            "a lift needs {dim} distinct columns below {}",
            2 * dim
        )));
    }
    let rows: Vec<usize> = (0..2 * dim)
        .filter(|r| sorted.binary_search(r).is_err())
        .collect();
    let m1 = cx.d1.select_columns(&sorted);
    let m2 = cx.d2.select_rows(&rows);
    let lu1 = m1.lu();
    let lu2 = m2.lu();
    let k1 = lu1.ln_condition_estimate();
    let k2 = lu2.ln_condition_estimate();
    // Smallest singular values, estimated as |M|_1 / cond_1(M), against the
    // joint rank threshold.
    let thr = cx.ln_rank_threshold();
    if m1.ln_norm1() - k1 < thr {
        return Err(Error::SingularDenominator {
            which: "d1 restricted to the lift",
        });
    }
    if m2.ln_norm1() - k2 < thr {
        let rank_d2 = pivot_rank(&cx.d2, thr);
        if rank_d2 < dim {
            return Err(Error::NotAcyclic {
                rank_d1: pivot_rank(&cx.d1, thr),
                rank_d2,
                dim,
            });
        }
    }
    let ln_condition = k1.max(k2);
    if ln_condition > ln_max_condition(cx.bits) {
        return Err(Error::IllConditioned {
            bits: cx.bits,
            log10_cond: ln_condition / std::f64::consts::LN_10,
        });
    }
    let crossings: usize = sorted
        .iter()
        .map(|&s| rows.iter().filter(|&&r| r > s).count())
        .sum();
    let mut num = lu2.log_det();
    if crossings % 2 == 1 {
        num = num.neg();
    }
    Ok(TorsionValue {
        value: num.div(lu1.log_det()),
        ln_condition,
        columns: sorted,
        bits: cx.bits,
    })
}

/// Torsion with an arbitrary lift `L` (`4N x 2N`):
/// `det[d2 | L] / det(d1 L)`.
pub fn torsion_with_lift<S: Scalar>(
    cx: &TwistedComplex<S>,
    lift: &Matrix<S>,
) -> Result<LogComplex> {
    if lift.shape() != (2 * cx.dim(), cx.dim()) {
        return Err(Error::BadParameter(format!(
            "a lift must be {} x {}",
            2 * cx.dim(),
            cx.dim()
        )));
    }
    let den = cx.d1.matmul(lift).log_det();
    if den.is_zero() {
        return Err(Error::SingularDenominator { which: "d1 L" });
    }
    Ok(cx.d2.hstack(lift).log_det().div(den))
}

/// `2^{2N} / (det(I - X) det(Y - I))`, valid when `X^p = -I`.
pub fn torsion_structured<S: Scalar>(cx: &TwistedComplex<S>) -> Result<TorsionValue> {
    cx.component().require_odd()?;
    structured_from_generators(&cx.x, &cx.y)
}

/// The structured value from `sigma(rho(x))` and `sigma(rho(y))` alone,
/// without assembling the boundary maps.
pub fn torsion_structured_at<S: Scalar>(rep: &Sl2Rep, n: usize, bits: u32) -> Result<TorsionValue> {
    rep.component().require_odd()?;
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "N",
            value: 0,
            expected: "N >= 1".into(),
        });
    }
    let x = sym_power_at(&rep.power_at::<S>(Generator::X, 1, bits), 2 * n);
    let y = sym_power_at(&rep.power_at::<S>(Generator::Y, 1, bits), 2 * n);
    structured_from_generators(&x, &y)
}

fn structured_from_generators<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> Result<TorsionValue> {
    let dim = x.rows();
    let bits = x.bits();
    let id = Matrix::<S>::identity(dim, bits);
    let mut value = LogComplex::from_polar(dim as f64 * std::f64::consts::LN_2, 0.0);
    let mut ln_condition = f64::NEG_INFINITY;
    for (m, which) in [(id.sub(x), "det(I - X)"), (y.sub(&id), "det(Y - I)")] {
        let lu = m.lu();
        if lu.is_singular() {
            return Err(Error::SingularDenominator { which });
        }
        ln_condition = ln_condition.max(lu.ln_condition_estimate());
        value = value.div(lu.log_det());
    }
    if ln_condition > ln_max_condition(bits) {
        return Err(Error::IllConditioned {
            bits,
            log10_cond: ln_condition / std::f64::consts::LN_10,
        });
    }
    Ok(TorsionValue {
        value,
        ln_condition,
        columns: (dim..2 * dim).collect(),
        bits,
    })
}

/// `2 #{l >= 1 : k (2l - 1) <= 2N - 1}`.
pub fn eigenvalue_one_count_formula(k: i64, n: usize) -> usize {
    let top = 2 * n as i64 - 1;
    let mut count = 0;
    let mut l = 1;
    while k * (2 * l - 1) <= top {
        count += 1;
        l += 1;
    }
    2 * count
}

/// Multiplicities `(xi, eta)` of the eigenvalue 1 of `X` and `Y` for an even
/// component, by the counting formula.
pub fn eigenvalue_one_multiplicities(rep: &Sl2Rep, n: usize) -> Result<(usize, usize)> {
    let c = rep.component();
    let k = rep.knot();
    if c.parity() != Parity::Even {
        return Err(Error::PreconditionViolated(format!(
            "component ({}, {}) is odd",
            c.a(),
            c.b()
        )));
    }
    use num_integer::Integer;
    if i64::from(c.a()).gcd(&k.p()) != 1 || i64::from(c.b()).gcd(&k.q()) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "need gcd(a, p) = gcd(b, q) = 1, got a = {}, b = {} for {k}",
            c.a(),
            c.b()
        )));
    }
    Ok((
        eigenvalue_one_count_formula(k.p(), n),
        eigenvalue_one_count_formula(k.q(), n),
    ))
}

/// Numerical multiplicity of the eigenvalue 1 of a diagonalizable matrix:
/// `dim - rank(M - I)`, by singular values.
pub fn eigenvalue_one_count<S: Scalar>(m: &Matrix<S>) -> usize {
    let dim = m.rows();
    let shifted = m.sub(&Matrix::identity(dim, m.bits()));
    let scale = m.ln_frobenius().max(0.0);
    let thr = ln_rank_eps(m.bits()) + (dim as f64).ln() + scale;
    dim - shifted
        .ln_singular_values()
        .iter()
        .filter(|&&s| s > thr)
        .count()
}

/// `2N - xi - eta`, the lower bound for `dim ker d2` on even components.
pub fn kernel_lower_bound(knot: &TorusKnot, n: usize) -> i64 {
    2 * n as i64
        - eigenvalue_one_count_formula(knot.p(), n) as i64
        - eigenvalue_one_count_formula(knot.q(), n) as i64
}

/// `1 / (1 - 1/p - 1/q) + 1 < 2N`.
pub fn dimension_inequality(knot: &TorusKnot, n: usize) -> bool {
    let (p, q) = (knot.p() as f64, knot.q() as f64);
    1.0 / (1.0 - 1.0 / p - 1.0 / q) + 1.0 < 2.0 * n as f64
}

/// How the adaptive drivers choose and check the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Starting precision; `None` derives it from the conditioning of the
    /// representation.
    pub start_bits: Option<u32>,
    /// Extra bits for the verification run.
    pub guard_bits: u32,
    pub max_bits: u32,
    /// Recompute at `bits + guard_bits` and require agreement.
    pub verify: bool,
    /// Relative agreement required between the two runs.
    pub agreement: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: None,
            guard_bits: 64,
            max_bits: 16384,
            verify: true,
            agreement: 1e-10,
        }
    }
}

/// A value produced by an adaptive driver.
#[derive(Clone, Debug, PartialEq)]
pub struct Adaptive<T> {
    pub value: T,
    /// Precision of the returned value.
    pub bits: u32,
    /// Relative difference to the lower-precision run, when verified.
    pub agreement: Option<f64>,
}

fn log2_condition(m: &Mat2) -> f64 {
    let f2 = m.norm().powi(2);
    let det = m.det().norm();
    let disc = (f2 * f2 - 4.0 * det * det).max(0.0).sqrt();
    ((f2 + disc) / (2.0 * det)).log2()
}

/// A priori bound, in bits, on the precision lost to conjugation: `sigma_n`
/// raises the condition number of the eigenbasis of each generator to the
/// power `n - 1`.
pub fn conditioning_bits(rep: &Sl2Rep, n: usize) -> f64 {
    let g = Mat2::new(1.0.into(), 1.0.into(), rep.t(), 1.0.into());
    let h = *rep.conjugator();
    let dim = 2 * n;
    (dim as f64 - 1.0) * (log2_condition(&h) + log2_condition(&(h * g)))
        + 2.0 * (dim as f64).log2()
        + 8.0
}

/// Starting precision for the determinant routes at dimension `2N`.
pub fn estimated_bits(rep: &Sl2Rep, n: usize) -> u32 {
    rank_safe_bits(conditioning_bits(rep, n) + n as f64)
}

/// Starting precision for the structured route, whose determinants see the
/// conditioning of `Y` itself, about twice [`conditioning_bits`].
pub fn structured_bits(rep: &Sl2Rep, n: usize) -> u32 {
    let need = 2.0 * conditioning_bits(rep, n)
        + n as f64
        + 64.0
        + (-tolerance::MAX_CONDITION.log2() + 53.0);
    round_bits(need.max(128.0))
}

/// Precision at which a relative singular value (or pivot) of size
/// `2^{-lost}` sits well above the rank threshold.
fn rank_safe_bits(lost: f64) -> u32 {
    let eps53 = -tolerance::RANK_EPS.log2();
    let need = 53.0 + ((lost + 40.0 - eps53).max(0.0)) / 0.625;
    round_bits(need.max(128.0))
}

fn round_bits(b: f64) -> u32 {
    ((b / 64.0).ceil() as u32) * 64
}

fn confirmable(e: &Error) -> bool {
    matches!(
        e,
        Error::NotAcyclic { .. }
            | Error::RankIndeterminate { .. }
            | Error::SingularDenominator { .. }
    )
}

fn same_kind(a: &Error, b: &Error) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

/// Run `attempt` at increasing precision until it succeeds (and, if the
/// policy asks, agrees with a run at `guard_bits` more). Rank-type errors are
/// reported only after they recur at doubled precision.
pub fn adapt<T, F, D>(
    policy: &PrecisionPolicy,
    start: u32,
    mut attempt: F,
    distance: D,
) -> Result<Adaptive<T>>
where
    F: FnMut(u32) -> Result<T>,
    D: Fn(&T, &T) -> f64,
{
    let mut bits = policy.start_bits.unwrap_or(start).max(53);
    let mut pending: Option<Error> = None;
    while bits <= policy.max_bits {
        match attempt(bits) {
            Ok(v) => {
                if !policy.verify {
                    return Ok(Adaptive {
                        value: v,
                        bits,
                        agreement: None,
                    });
                }
                let hi = bits + policy.guard_bits;
                match attempt(hi) {
                    Ok(w) => {
                        let d = distance(&v, &w);
                        if d <= policy.agreement {
                            return Ok(Adaptive {
                                value: w,
                                bits: hi,
                                agreement: Some(d),
                            });
                        }
                        debug!("runs at {bits} and {hi} bits differ by {d:e}; escalating");
                    }
                    Err(e) => debug!("verification at {hi} bits failed: {e}; escalating"),
                }
                pending = None;
            }
            Err(e) if confirmable(&e) => {
                if pending.as_ref().is_some_and(|p| same_kind(p, &e)) {
                    return Err(e);
                }
                debug!("{e} at {bits} bits; confirming at higher precision");
                pending = Some(e);
            }
            Err(e @ (Error::IllConditioned { .. } | Error::ChainConditionViolated { .. })) => {
                debug!("{e} at {bits} bits; escalating");
                pending = None;
            }
            Err(e) => return Err(e),
        }
        bits *= 2;
    }
    Err(pending.unwrap_or(Error::PrecisionExhausted {
        max_bits: policy.max_bits,
    }))
}

fn log_distance(a: &LogComplex, b: &LogComplex) -> f64 {
    a.relative_difference(*b)
}

/// [`torsion_generic`] at an automatically chosen, verified precision.
pub fn torsion_generic_adaptive(
    rep: &Sl2Rep,
    n: usize,
    policy: &PrecisionPolicy,
) -> Result<Adaptive<LogComplex>> {
    let run = adapt(
        policy,
        estimated_bits(rep, n),
        |bits| {
            let cx = build_complex_at::<MpComplex>(rep, n, bits)?;
            Ok(torsion_generic(&cx)?.value)
        },
        log_distance,
    )?;
    Ok(run)
}

/// [`torsion_structured`] at an automatically chosen, verified precision.
pub fn torsion_structured_adaptive(
    rep: &Sl2Rep,
    n: usize,
    policy: &PrecisionPolicy,
) -> Result<Adaptive<LogComplex>> {
    rep.component().require_odd()?;
    adapt(
        policy,
        structured_bits(rep, n),
        |bits| Ok(torsion_structured_at::<MpComplex>(rep, n, bits)?.value),
        log_distance,
    )
}

/// [`homology_dimensions`] at an automatically chosen precision, confirmed by
/// identical ranks at the verification precision.
pub fn homology_adaptive(
    rep: &Sl2Rep,
    n: usize,
    policy: &PrecisionPolicy,
) -> Result<Adaptive<HomologyReport>> {
    adapt(
        policy,
        estimated_bits(rep, n),
        |bits| homology_dimensions(&build_complex_at::<MpComplex>(rep, n, bits)?),
        |a, b| {
            if a.dims() == b.dims() {
                0.0
            } else {
                f64::INFINITY
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rep(p: i64, q: i64, a: i64, b: i64, t: Complex64) -> Sl2Rep {
        let k = TorusKnot::new(p, q).unwrap();
        Sl2Rep::build(&k.component(a, b).unwrap(), t).unwrap()
    }

    #[test]
    fn trefoil_n1_shapes_and_blocks() {
        let cx = build_complex(&rep(2, 3, 1, 1, c(-1.0, 0.0)), 1).unwrap();
        assert_eq!(cx.d1().shape(), (2, 4));
        assert_eq!(cx.d2().shape(), (4, 2));
        let top = cx.d2().select_rows(&[0, 1]);
        assert!((top.log_det().to_c64().unwrap() - c(2.0, 0.0)).norm() < 1e-14);
        assert!(cx.chain_residual() < 1e-15);
    }

    #[test]
    fn trefoil_values() {
        let r = rep(2, 3, 1, 1, c(-1.0, 0.0));
        for (n, expect) in [(1, 2.0), (2, 1.0)] {
            let cx = build_complex(&r, n).unwrap();
            let g = torsion_generic(&cx).unwrap().value.to_c64().unwrap();
            let s = torsion_structured(&cx).unwrap().value.to_c64().unwrap();
            assert!((g - c(expect, 0.0)).norm() < 1e-12, "generic N={n}: {g}");
            assert!((s - c(expect, 0.0)).norm() < 1e-12, "structured N={n}: {s}");
        }
    }

    #[test]
    fn lift_sign_convention() {
        let cx = build_complex(&rep(2, 5, 1, 3, c(2.0, 0.0)), 1).unwrap();
        let paper_block = torsion_with_columns(&cx, &[2, 3]).unwrap().value;
        let structured = torsion_structured(&cx).unwrap().value;
        assert!(paper_block.relative_difference(structured) < 1e-12);
        for cols in [[0, 1], [0, 2], [1, 3], [0, 3]] {
            if let Ok(v) = torsion_with_columns(&cx, &cols) {
                assert!(v.value.relative_difference(structured) < 1e-10, "{cols:?}");
            }
        }
        assert!(torsion_with_columns(&cx, &[1, 1]).is_err());
    }

    #[test]
    fn even_component_is_not_acyclic() {
        let r = rep(3, 5, 2, 2, c(-1.0, 0.0));
        let cx = build_complex(&r, 1).unwrap();
        assert!(cx.d2().max_abs() < 1e-14);
        let h = homology_dimensions(&cx).unwrap();
        assert_eq!(h.h2, 2);
        assert!(matches!(
            torsion_generic(&cx),
            Err(Error::NotAcyclic { .. })
        ));
        assert!(matches!(
            torsion_structured(&cx),
            Err(Error::WrongParity { a: 2, b: 2 })
        ));
    }

    #[test]
    fn counting_formula() {
        assert_eq!(eigenvalue_one_count_formula(3, 2), 2);
        assert_eq!(eigenvalue_one_count_formula(5, 2), 0);
        assert_eq!(eigenvalue_one_count_formula(3, 5), 4);
        let r = rep(3, 5, 2, 2, c(-1.0, 0.0));
        assert_eq!(eigenvalue_one_multiplicities(&r, 2).unwrap(), (2, 0));
        let odd = rep(3, 5, 1, 1, c(-1.0, 0.0));
        assert!(matches!(
            eigenvalue_one_multiplicities(&odd, 2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn numerical_eigenvalue_one_count() {
        let r = rep(3, 5, 2, 4, c(-1.0, 0.0));
        for n in 1..=6 {
            let cx = build_complex(&r, n).unwrap();
            let (xi, eta) = eigenvalue_one_multiplicities(&r, n).unwrap();
            assert_eq!(eigenvalue_one_count(cx.x()), xi, "N = {n}");
            assert_eq!(eigenvalue_one_count(cx.y()), eta, "N = {n}");
        }
    }

    #[test]
    fn inequality() {
        let k = TorusKnot::new(3, 5).unwrap();
        assert!(!dimension_inequality(&k, 1));
        assert!(dimension_inequality(&k, 2));
        assert_eq!(kernel_lower_bound(&k, 2), 2);
    }

    #[test]
    fn adaptive_driver_reaches_a_verified_value() {
        let r = rep(2, 3, 1, 1, c(2.0, 0.0));
        let v = torsion_generic_adaptive(&r, 3, &PrecisionPolicy::default()).unwrap();
        assert!(v.agreement.unwrap() < 1e-10);
        let s = torsion_structured_adaptive(&r, 3, &PrecisionPolicy::default()).unwrap();
        assert!(v.value.relative_difference(s.value) < 1e-12);
        let even = rep(3, 5, 2, 2, c(2.0, 0.0));
        let e = torsion_generic_adaptive(&even, 2, &PrecisionPolicy::default());
        assert!(matches!(e, Err(Error::NotAcyclic { .. })), "{e:?}");
    }
}
