//! Irreducible SL(2,C) representations of torus knot groups.
//!
//! A representation in the component `(a, b)` is built as
//! `x -> diag(e^{i pi a/p}, e^{-i pi a/p})` and
//! `y -> g diag(e^{i pi b/q}, e^{-i pi b/q}) g^{-1}` with `g = [[1, 1], [t, 1]]`,
//! optionally conjugated afterwards by some `h` in SL(2,C). Every entry of
//! every power of the generators can be re-evaluated at any precision from
//! these exact data, see [`Sl2Rep::power_at`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{Component, TorusKnot};
use crate::scalar::Scalar;
use crate::tolerance::{TAU_DET, TAU_REL};

/// A 2x2 complex matrix, row-major `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn diag(x: Complex64, y: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2::new(x, z, z, y)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn scale(&self, k: Complex64) -> Mat2 {
        Mat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// `self^k` by repeated squaring; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> Mat2 {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Mat2::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_unimodular(&self) -> bool {
        (self.det() - 1.0).norm() <= TAU_DET
    }

    pub fn require_unimodular(&self) -> Result<()> {
        let deviation = (self.det() - 1.0).norm();
        if deviation <= TAU_DET {
            Ok(())
        } else {
            Err(Error::NotUnimodular { deviation })
        }
    }

    /// Entries in row-major order at working precision `bits`.
    pub fn to_scalars<S: Scalar>(&self, bits: u32) -> [S; 4] {
        [self.a, self.b, self.c, self.d].map(|z| S::from_c64(z, bits))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
}

/// An explicit representation `rho` in a component of the character variety.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sl2Rep {
    knot: TorusKnot,
    component: Component,
    t: Complex64,
    conjugator: Mat2,
    rho_x: Mat2,
    rho_y: Mat2,
}

impl Sl2Rep {
    /// Build the representation with conjugation parameter `t` and check
    /// that it is irreducible.
    pub fn build(component: &Component, t: Complex64) -> Result<Self> {
        if t == Complex64::new(0.0, 0.0) {
            return Err(Error::BadParameter(
                "t = 0 gives rho(x) and rho(y) a common eigenvector".into(),
            ));
        }
        let rep = Self::build_unchecked(component, t)?;
        let [plus, minus] = rep.excluded_traces();
        let trace = rep.meridian_trace();
        for excluded in [plus, minus] {
            if trace_hits(trace, excluded) {
                return Err(Error::ExcludedTrace {
                    trace: trace.to_string(),
                    excluded: excluded.to_string(),
                });
            }
        }
        if !rep.is_irreducible()? {
            return Err(Error::BadParameter(format!(
                "t = {t} yields a reducible representation"
            )));
        }
        Ok(rep)
    }

    /// Build without the irreducibility check. Only `t = 1`, where the
    /// conjugator degenerates, and non-finite `t` are rejected; `t = 0` gives
    /// a reducible representation.
    pub fn build_unchecked(component: &Component, t: Complex64) -> Result<Self> {
        if !t.is_finite() || t == Complex64::new(1.0, 0.0) {
            return Err(Error::BadParameter(format!(
                "t = {t} makes the conjugator singular"
            )));
        }
        let mut rep = Sl2Rep {
            knot: *component.knot(),
            component: *component,
            t,
            conjugator: Mat2::IDENTITY,
            rho_x: Mat2::IDENTITY,
            rho_y: Mat2::IDENTITY,
        };
        rep.rho_x = rep.power(Generator::X, 1);
        rep.rho_y = rep.power(Generator::Y, 1);
        Ok(rep)
    }

    /// The representation `h rho h^{-1}`.
    pub fn conjugate(&self, h: &Mat2) -> Result<Self> {
        h.require_unimodular()?;
        let mut rep = self.clone();
        rep.conjugator = *h * self.conjugator;
        rep.rho_x = rep.power(Generator::X, 1);
        rep.rho_y = rep.power(Generator::Y, 1);
        Ok(rep)
    }

    pub fn knot(&self) -> &TorusKnot {
        &self.knot
    }

    pub fn component(&self) -> &Component {
        &self.component
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    /// The accumulated conjugator `h` of [`Sl2Rep::conjugate`].
    pub fn conjugator(&self) -> &Mat2 {
        &self.conjugator
    }

    pub fn rho_x(&self) -> &Mat2 {
        &self.rho_x
    }

    pub fn rho_y(&self) -> &Mat2 {
        &self.rho_y
    }

    /// `rho(gen)^k` evaluated in double precision from the exact data.
    pub fn power(&self, gen: Generator, k: i64) -> Mat2 {
        let [a, b, c, d] = self.power_at::<Complex64>(gen, k, 53);
        Mat2::new(a, b, c, d)
    }

    /// `rho(gen)^k` at `bits` of working precision, row-major.
    ///
    /// Computed as `C diag(w^k, w^{-k}) C^{-1}` with the eigenvalue angle
    /// reduced exactly, so the rounding error does not grow with `k`.
    pub fn power_at<S: Scalar>(&self, gen: Generator, k: i64, bits: u32) -> [S; 4] {
        let (num, den, basis) = match gen {
            Generator::X => (
                i64::from(self.component.a()),
                self.knot.p(),
                self.conjugator,
            ),
            Generator::Y => (
                i64::from(self.component.b()),
                self.knot.q(),
                self.conjugator * Mat2::new(1.0.into(), 1.0.into(), self.t, 1.0.into()),
            ),
        };
        let w = S::exp_i_pi(num * k, den, bits);
        let w_inv = w.conj_ref();
        let [c0, c1, c2, c3] = basis.to_scalars::<S>(bits);
        let mut det = c0.mul_ref(&c3);
        det.mul_sub_assign(&c1, &c2);
        // C diag(w, w') adj(C) / det(C)
        let e0 = c0.mul_ref(&w);
        let e1 = c1.mul_ref(&w_inv);
        let e2 = c2.mul_ref(&w);
        let e3 = c3.mul_ref(&w_inv);
        let mut m0 = e0.mul_ref(&c3);
        m0.mul_sub_assign(&e1, &c2);
        let mut m1 = e1.mul_ref(&c0);
        m1.mul_sub_assign(&e0, &c1);
        let mut m2 = e2.mul_ref(&c3);
        m2.mul_sub_assign(&e3, &c2);
        let mut m3 = e3.mul_ref(&c0);
        m3.mul_sub_assign(&e2, &c1);
        [m0, m1, m2, m3].map(|m| m.div_ref(&det))
    }

    /// `tr rho(x^{-r} y^s)`.
    pub fn meridian_trace(&self) -> Complex64 {
        (self.rho_x.pow(-self.knot.r()) * self.rho_y.pow(self.knot.s())).trace()
    }

    /// `2 cos(pi (r a / p + s b / q))` and `2 cos(pi (r a / p - s b / q))`.
    pub fn excluded_traces(&self) -> [Complex64; 2] {
        excluded_traces(&self.component)
    }

    /// Irreducibility by two independent tests that must agree: a common
    /// eigenvector search and the meridian-trace criterion.
    pub fn is_irreducible(&self) -> Result<bool> {
        let eigenvector = !has_common_eigenvector(&self.rho_x, &self.rho_y);
        let trace = {
            let tr = self.meridian_trace();
            !self.excluded_traces().iter().any(|&e| trace_hits(tr, e))
        };
        if eigenvector != trace {
            return Err(Error::InconsistentTest { eigenvector, trace });
        }
        Ok(eigenvector)
    }

    /// `||rho(x)^p - rho(y)^q|| <= tau_rel * max(1, ||rho(x)^p||)`.
    pub fn check_group_relation(&self) -> bool {
        group_relation_holds(&self.knot, &self.rho_x, &self.rho_y)
    }
}

/// The excluded meridian traces of a component.
pub fn excluded_traces(component: &Component) -> [Complex64; 2] {
    let k = component.knot();
    let (p, q, r, s) = (k.p(), k.q(), k.r(), k.s());
    let (a, b) = (i64::from(component.a()), i64::from(component.b()));
    let two_cos = |num: i64| {
        let w = <Complex64 as Scalar>::exp_i_pi(num, p * q, 53);
        Complex64::new(2.0 * w.re, 0.0)
    };
    [
        two_cos(r * a * q + s * b * p),
        two_cos(r * a * q - s * b * p),
    ]
}

/// Group relation test on arbitrary matrices, by repeated multiplication.
pub fn group_relation_holds(knot: &TorusKnot, x: &Mat2, y: &Mat2) -> bool {
    let mut xp = Mat2::IDENTITY;
    for _ in 0..knot.p() {
        xp = xp * *x;
    }
    let mut yq = Mat2::IDENTITY;
    for _ in 0..knot.q() {
        yq = yq * *y;
    }
    (xp - yq).norm() <= TAU_REL * xp.norm().max(1.0)
}

fn trace_hits(trace: Complex64, excluded: Complex64) -> bool {
    (trace - excluded).norm() <= TAU_REL * excluded.norm().max(1.0)
}

/// Eigenvectors of a 2x2 matrix with distinct eigenvalues.
fn eigenvectors(m: &Mat2) -> [(Complex64, Complex64); 2] {
    let tr = m.trace();
    let disc = (tr * tr - 4.0 * m.det()).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0].map(|lambda| {
        let u = (m.b, lambda - m.a);
        let v = (lambda - m.d, m.c);
        if u.0.norm() + u.1.norm() >= v.0.norm() + v.1.norm() {
            u
        } else {
            v
        }
    })
}

fn has_common_eigenvector(x: &Mat2, y: &Mat2) -> bool {
    eigenvectors(x).iter().any(|&(v0, v1)| {
        let w0 = y.a * v0 + y.b * v1;
        let w1 = y.c * v0 + y.d * v1;
        let cross = v0 * w1 - v1 * w0;
        let scale = (v0.norm_sqr() + v1.norm_sqr()).sqrt() * (w0.norm_sqr() + w1.norm_sqr()).sqrt();
        cross.norm() <= TAU_REL * scale
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trefoil() -> Component {
        TorusKnot::new(2, 3).unwrap().component(1, 1).unwrap()
    }

    #[test]
    fn trefoil_generators() {
        let rep = Sl2Rep::build(&trefoil(), c(-1.0, 0.0)).unwrap();
        let x = rep.rho_x();
        assert!((x.a - c(0.0, 1.0)).norm() < 1e-15 && (x.d - c(0.0, -1.0)).norm() < 1e-15);
        assert!(x.trace().norm() < 1e-15);
        assert!((rep.rho_y().trace() - c(1.0, 0.0)).norm() < 1e-12);
        let minus_i = Mat2::IDENTITY.scale(c(-1.0, 0.0));
        assert!((x.pow(2) - minus_i).norm() < 1e-12);
        assert!((rep.rho_y().pow(3) - minus_i).norm() < 1e-12);
        assert!(rep.check_group_relation());
        assert!(rep.is_irreducible().unwrap());
    }

    #[test]
    fn excluded_values_for_the_trefoil() {
        let [plus, minus] = excluded_traces(&trefoil());
        let r3 = 3f64.sqrt();
        assert!((plus.re + r3).abs() < 1e-14, "{plus}");
        assert!((minus.re - r3).abs() < 1e-14, "{minus}");
    }

    #[test]
    fn degenerate_parameters() {
        assert!(matches!(
            Sl2Rep::build(&trefoil(), c(0.0, 0.0)),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            Sl2Rep::build(&trefoil(), c(1.0, 0.0)),
            Err(Error::BadParameter(_))
        ));
        let reducible = Sl2Rep::build_unchecked(&trefoil(), c(0.0, 0.0)).unwrap();
        assert!(!reducible.is_irreducible().unwrap());
        assert!(matches!(
            Sl2Rep::build(&trefoil(), c(1e-13, 0.0)),
            Err(Error::ExcludedTrace { .. })
        ));
    }

    #[test]
    fn perturbed_generator_breaks_the_relation() {
        let rep = Sl2Rep::build(&trefoil(), c(-1.0, 0.0)).unwrap();
        let bumped = *rep.rho_y() + Mat2::new(c(1e-3, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(!group_relation_holds(rep.knot(), rep.rho_x(), &bumped));
    }

    #[test]
    fn powers_agree_with_repeated_products() {
        let k = TorusKnot::new(3, 7).unwrap();
        let rep = Sl2Rep::build(&k.component(1, 5).unwrap(), c(3.0, 1.0)).unwrap();
        for e in [-4, 0, 1, 5, 13] {
            for g in [Generator::X, Generator::Y] {
                let base = if g == Generator::X {
                    rep.rho_x()
                } else {
                    rep.rho_y()
                };
                assert!((rep.power(g, e) - base.pow(e)).norm() < 1e-11, "{g:?}^{e}");
            }
        }
    }

    #[test]
    fn conjugation_preserves_traces() {
        let rep = Sl2Rep::build(&trefoil(), c(2.0, 0.0)).unwrap();
        let h = Mat2::new(c(2.0, 1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).scale(c(0.0, 1.0));
        assert!(h.is_unimodular());
        let conj = rep.conjugate(&h).unwrap();
        assert!((conj.meridian_trace() - rep.meridian_trace()).norm() < 1e-9);
        assert!((conj.rho_y().trace() - rep.rho_y().trace()).norm() < 1e-12);
        assert!(rep
            .conjugate(&Mat2::diag(c(2.0, 0.0), c(1.0, 0.0)))
            .is_err());
    }
}
