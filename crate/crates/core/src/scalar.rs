//! Complex scalars at a chosen working precision.
//!
//! [`Scalar`] is implemented for [`Complex64`] (53-bit mantissa) and for
//! [`MpComplex`] (a pair of MPFR floats, any precision). Dense linear algebra in
//! [`crate::matrix`] is written once against this trait.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::{Assign, Float};

/// Natural logarithm and argument of a nonzero complex number, or zero.
///
/// Used to carry determinants and torsion values whose magnitude can leave
/// the `f64` range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    /// `ln |z|`; `-inf` encodes zero.
    pub log_abs: f64,
    /// `arg z` in `(-pi, pi]`.
    pub arg: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_abs: f64::NEG_INFINITY,
        arg: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_abs: 0.0,
        arg: 0.0,
    };

    pub fn from_c64(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            Self::ZERO
        } else {
            LogComplex {
                log_abs: z.norm().ln(),
                arg: z.arg(),
            }
        }
    }

    pub fn from_polar(log_abs: f64, arg: f64) -> Self {
        LogComplex {
            log_abs,
            arg: wrap_angle(arg),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    pub fn mul(self, other: LogComplex) -> LogComplex {
        LogComplex::from_polar(self.log_abs + other.log_abs, self.arg + other.arg)
    }

    pub fn div(self, other: LogComplex) -> LogComplex {
        LogComplex::from_polar(self.log_abs - other.log_abs, self.arg - other.arg)
    }

    pub fn neg(self) -> LogComplex {
        LogComplex::from_polar(self.log_abs, self.arg + PI)
    }

    /// The value as an `f64` complex number, when `|z|` is representable.
    pub fn to_c64(self) -> Option<Complex64> {
        if self.is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        if self.log_abs.abs() >= 700.0 || !self.log_abs.is_finite() {
            return None;
        }
        Some(Complex64::from_polar(self.log_abs.exp(), self.arg))
    }

    /// `|self - other| / |other|`, evaluated without leaving log space.
    pub fn relative_difference(self, other: LogComplex) -> f64 {
        if other.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        if self.is_zero() {
            return 1.0;
        }
        let ratio =
            Complex64::from_polar((self.log_abs - other.log_abs).exp(), self.arg - other.arg);
        (ratio - 1.0).norm()
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_c64() {
            Some(z) => write!(f, "{z}"),
            None => write!(f, "exp({}) * e^(i {})", self.log_abs, self.arg),
        }
    }
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// A complex number type usable by the dense linear algebra.
///
/// Every value carries (or implies) its working precision in bits; values
/// combined in one operation must share it.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    fn from_c64(z: Complex64, bits: u32) -> Self;

    fn zero(bits: u32) -> Self {
        Self::from_c64(Complex64::new(0.0, 0.0), bits)
    }

    fn one(bits: u32) -> Self {
        Self::from_c64(Complex64::new(1.0, 0.0), bits)
    }

    fn from_i64(v: i64, bits: u32) -> Self;

    /// `exp(i pi num / den)`, with the angle reduced exactly before rounding.
    fn exp_i_pi(num: i64, den: i64, bits: u32) -> Self;

    fn bits(&self) -> u32;

    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self);
    /// `self -= a * b`
    fn mul_sub_assign(&mut self, a: &Self, b: &Self);
    /// `self += conj(a) * b`
    fn conj_mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.mul_add_assign(&a.conj_ref(), b);
    }
    /// `self += re(r) * b`, for a real-valued `r`.
    fn real_mul_add_assign(&mut self, r: &Self, b: &Self) {
        self.mul_add_assign(r, b);
    }
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn conj_ref(&self) -> Self;
    /// `|z|^2` as a real-valued scalar.
    fn norm_sqr_ref(&self) -> Self;
    /// `|z|` as a real-valued scalar.
    fn abs_ref(&self) -> Self;
    /// Principal square root.
    fn sqrt_ref(&self) -> Self;

    fn is_zero(&self) -> bool;
    fn re_is_negative(&self) -> bool;

    /// A cheap key, monotone in `|z|` up to a factor of `sqrt(2)`, for pivot
    /// selection. Only comparable between values of the same type.
    fn magnitude_key(&self) -> f64;

    /// `ln |z|`, `-inf` for zero.
    fn ln_abs(&self) -> f64;
    fn arg(&self) -> f64;

    /// Nearest `f64` complex number; may overflow to infinity.
    fn to_c64(&self) -> Complex64;

    fn to_log(&self) -> LogComplex {
        if self.is_zero() {
            LogComplex::ZERO
        } else {
            LogComplex::from_polar(self.ln_abs(), self.arg())
        }
    }

    /// Product of `items` in log form.
    fn log_product(items: &[Self]) -> LogComplex {
        let mut log_abs = NeumaierSum::default();
        let mut arg = NeumaierSum::default();
        for z in items {
            if z.is_zero() {
                return LogComplex::ZERO;
            }
            log_abs.add(z.ln_abs());
            arg.add(z.arg());
        }
        LogComplex::from_polar(log_abs.total(), arg.total())
    }
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Scalar for Complex64 {
    fn from_c64(z: Complex64, _bits: u32) -> Self {
        z
    }

    fn from_i64(v: i64, _bits: u32) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn exp_i_pi(num: i64, den: i64, _bits: u32) -> Self {
        let (num, den) = reduce_half_turns(num, den);
        let (s, c) = (PI * num as f64 / den as f64).sin_cos();
        Complex64::new(c, s)
    }

    fn bits(&self) -> u32 {
        53
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    #[inline]
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    #[inline]
    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn conj_ref(&self) -> Self {
        self.conj()
    }

    fn norm_sqr_ref(&self) -> Self {
        Complex64::new(self.norm_sqr(), 0.0)
    }

    fn abs_ref(&self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }

    fn sqrt_ref(&self) -> Self {
        self.sqrt()
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn re_is_negative(&self) -> bool {
        self.re < 0.0
    }

    #[inline]
    fn magnitude_key(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }

    fn ln_abs(&self) -> f64 {
        self.norm().ln()
    }

    fn arg(&self) -> f64 {
        Complex64::arg(*self)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Reduce `num/den` half-turns to `(-den, den]` with a positive denominator.
fn reduce_half_turns(num: i64, den: i64) -> (i64, i64) {
    assert!(den != 0, "zero denominator");
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let period = 2 * den;
    let mut r = num.rem_euclid(period);
    if r > den {
        r -= period;
    }
    (r, den)
}

/// A complex number as a pair of MPFR floats sharing one precision.
///
/// Products are formed from real operations, so they are not correctly
/// rounded as with MPC, but carry an error of a few units in the last place
/// at a fraction of the cost.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    re: Float,
    im: Float,
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        MpComplex { re, im }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_c64())
    }
}

thread_local! {
    static SCRATCH: RefCell<Float> = RefCell::new(Float::new(64));
}

fn with_scratch<R>(bits: u32, f: impl FnOnce(&mut Float) -> R) -> R {
    SCRATCH.with(|cell| {
        let mut s = cell.borrow_mut();
        if s.prec() != bits {
            s.set_prec(bits);
        }
        f(&mut s)
    })
}

fn float_log2_key(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    f64::from(e) + m.abs().log2()
}

impl Scalar for MpComplex {
    fn from_c64(z: Complex64, bits: u32) -> Self {
        MpComplex {
            re: Float::with_val(bits, z.re),
            im: Float::with_val(bits, z.im),
        }
    }

    fn from_i64(v: i64, bits: u32) -> Self {
        MpComplex {
            re: Float::with_val(bits, v),
            im: Float::new(bits),
        }
    }

    fn exp_i_pi(num: i64, den: i64, bits: u32) -> Self {
        let (num, den) = reduce_half_turns(num, den);
        let work = bits + 32;
        let angle = Float::with_val(work, Constant::Pi) * num / den;
        let (s, c) = angle.sin_cos(Float::new(work));
        MpComplex {
            re: Float::with_val(bits, c),
            im: Float::with_val(bits, s),
        }
    }

    fn bits(&self) -> u32 {
        self.re.prec()
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }

    #[inline]
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        with_scratch(self.re.prec(), |s| {
            s.assign(&a.re * &b.re);
            self.re += &*s;
            s.assign(&a.im * &b.im);
            self.re -= &*s;
            s.assign(&a.re * &b.im);
            self.im += &*s;
            s.assign(&a.im * &b.re);
            self.im += &*s;
        });
    }

    #[inline]
    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        with_scratch(self.re.prec(), |s| {
            s.assign(&a.re * &b.re);
            self.re -= &*s;
            s.assign(&a.im * &b.im);
            self.re += &*s;
            s.assign(&a.re * &b.im);
            self.im -= &*s;
            s.assign(&a.im * &b.re);
            self.im -= &*s;
        });
    }

    fn conj_mul_add_assign(&mut self, a: &Self, b: &Self) {
        with_scratch(self.re.prec(), |s| {
            s.assign(&a.re * &b.re);
            self.re += &*s;
            s.assign(&a.im * &b.im);
            self.re += &*s;
            s.assign(&a.re * &b.im);
            self.im += &*s;
            s.assign(&a.im * &b.re);
            self.im -= &*s;
        });
    }

    fn real_mul_add_assign(&mut self, r: &Self, b: &Self) {
        with_scratch(self.re.prec(), |s| {
            s.assign(&r.re * &b.re);
            self.re += &*s;
            s.assign(&r.re * &b.im);
            self.im += &*s;
        });
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = MpComplex::zero(self.bits());
        out.mul_add_assign(self, rhs);
        out
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        let bits = self.bits();
        let mut d = Float::with_val(bits, rhs.re.square_ref());
        d += rhs.im.square_ref().complete(bits);
        let mut out = self.mul_ref(&rhs.conj_ref());
        out.re /= &d;
        out.im /= &d;
        out
    }

    fn neg_ref(&self) -> Self {
        MpComplex {
            re: (-&self.re).complete(self.bits()),
            im: (-&self.im).complete(self.bits()),
        }
    }

    fn conj_ref(&self) -> Self {
        MpComplex {
            re: self.re.clone(),
            im: (-&self.im).complete(self.bits()),
        }
    }

    fn norm_sqr_ref(&self) -> Self {
        let bits = self.bits();
        let mut re = Float::with_val(bits, self.re.square_ref());
        re += self.im.square_ref().complete(bits);
        MpComplex {
            re,
            im: Float::new(bits),
        }
    }

    fn abs_ref(&self) -> Self {
        let bits = self.bits();
        MpComplex {
            re: Float::with_val(bits, self.re.hypot_ref(&self.im)),
            im: Float::new(bits),
        }
    }

    fn sqrt_ref(&self) -> Self {
        let bits = self.bits();
        if self.im.is_zero() && !self.re.is_sign_negative() {
            return MpComplex {
                re: Float::with_val(bits, self.re.sqrt_ref()),
                im: Float::new(bits),
            };
        }
        let r = Float::with_val(bits, self.re.hypot_ref(&self.im));
        if !self.re.is_sign_negative() {
            let u = ((r + &self.re) / 2u32).sqrt();
            let v = Float::with_val(bits, &self.im / &u) / 2u32;
            MpComplex { re: u, im: v }
        } else {
            let mut v = ((r - &self.re) / 2u32).sqrt();
            if self.im.is_sign_negative() {
                v = -v;
            }
            let u = Float::with_val(bits, &self.im / &v) / 2u32;
            MpComplex { re: u, im: v }
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn re_is_negative(&self) -> bool {
        self.re.is_sign_negative() && !self.re.is_zero()
    }

    #[inline]
    fn magnitude_key(&self) -> f64 {
        float_log2_key(&self.re).max(float_log2_key(&self.im))
    }

    fn ln_abs(&self) -> f64 {
        if Scalar::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        // Only an f64 is returned, so |z| at 64 bits and the log of its
        // mantissa suffice; a full-precision MPFR log costs far more.
        let (m, e) = Float::with_val(64, self.re.hypot_ref(&self.im)).to_f64_exp();
        m.ln() + f64::from(e) * std::f64::consts::LN_2
    }

    fn arg(&self) -> f64 {
        Float::with_val(self.bits(), self.im.atan2_ref(&self.re)).to_f64()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn log_product(items: &[Self]) -> LogComplex {
        let Some(first) = items.first() else {
            return LogComplex::ONE;
        };
        let mut acc = MpComplex::one(first.bits());
        for z in items {
            acc = acc.mul_ref(z);
        }
        acc.to_log()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_turn_reduction_is_exact() {
        assert_eq!(reduce_half_turns(7, 3), (1, 3));
        assert_eq!(reduce_half_turns(3, 3), (3, 3));
        assert_eq!(reduce_half_turns(-3, 3), (3, 3));
        assert_eq!(reduce_half_turns(5, -2), (-1, 2));
    }

    #[test]
    fn roots_of_unity_agree_across_precisions() {
        for (num, den) in [(1, 3), (2, 5), (-7, 9), (1_000_003, 7)] {
            let a = <Complex64 as Scalar>::exp_i_pi(num, den, 53);
            let b = <MpComplex as Scalar>::exp_i_pi(num, den, 256);
            assert!((a - b.to_c64()).norm() < 1e-15, "{num}/{den}");
        }
        let i = <MpComplex as Scalar>::exp_i_pi(1, 2, 512);
        assert!(i.re().clone().abs() < Float::with_val(512, 1e-150));
    }

    #[test]
    fn log_complex_arithmetic() {
        let a = LogComplex::from_c64(Complex64::new(0.0, 2.0));
        let b = LogComplex::from_c64(Complex64::new(-4.0, 0.0));
        let q = a.div(b).to_c64().unwrap();
        assert!((q - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!(
            a.mul(b)
                .relative_difference(LogComplex::from_c64(Complex64::new(0.0, -8.0)))
                < 1e-15
        );
        assert!(LogComplex::ZERO.to_c64().unwrap() == Complex64::new(0.0, 0.0));
        assert!(LogComplex::from_polar(800.0, 0.0).to_c64().is_none());
    }

    #[test]
    fn mp_product_does_not_overflow() {
        let big = MpComplex::from_c64(Complex64::new(1e200, 0.0), 128);
        let items = vec![big.clone(), big.clone(), big];
        let l = MpComplex::log_product(&items);
        assert!((l.log_abs - 600.0 * 10f64.ln()).abs() < 1e-9);
        let l64 = Complex64::log_product(&[Complex64::new(1e200, 0.0); 3]);
        assert!((l64.log_abs - l.log_abs).abs() < 1e-9);
    }

    #[test]
    fn fused_updates_match_plain_arithmetic() {
        let a = MpComplex::from_c64(Complex64::new(1.5, -2.0), 200);
        let b = MpComplex::from_c64(Complex64::new(0.25, 3.0), 200);
        let mut acc = MpComplex::from_c64(Complex64::new(1.0, 1.0), 200);
        acc.mul_add_assign(&a, &b);
        acc.mul_sub_assign(&a, &b);
        assert!((acc.to_c64() - Complex64::new(1.0, 1.0)).norm() < 1e-50);
        let q = a.mul_ref(&b).div_ref(&b);
        assert!((q.to_c64() - a.to_c64()).norm() < 1e-50);
    }

    #[test]
    fn mp_elementary_functions() {
        for z in [
            Complex64::new(3.0, 4.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(-1.0, -1e-3),
            Complex64::new(4.0, 0.0),
        ] {
            let m = MpComplex::from_c64(z, 160);
            assert!((m.sqrt_ref().to_c64() - z.sqrt()).norm() < 1e-14, "{z}");
            assert!((m.abs_ref().to_c64().re - z.norm()).abs() < 1e-14);
            assert!((Scalar::arg(&m) - z.arg()).abs() < 1e-14);
            assert!((m.ln_abs() - z.norm().ln()).abs() < 1e-14);
        }
    }
}
