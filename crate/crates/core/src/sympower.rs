//! Symmetric powers `sigma_n : SL(2,C) -> SL(n,C)`.
//!
//! `V_n` is the space of homogeneous polynomials of degree `n - 1` in
//! `z1, z2` with basis `z1^{n-1-k} z2^k`, `k = 0..n`. A matrix `A` acts by
//! `(A . f)(z) = f(A^{-1} z)`, so column `k` of `sigma_n(A)` holds the
//! coefficients of `(alpha z1 + beta z2)^{n-1-k} (gamma z1 + delta z2)^k`
//! where `A^{-1} = [[alpha, beta], [gamma, delta]]`.

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::sl2::Mat2;

/// The monomial basis of `V_n`, ordered by increasing `z2`-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
}

impl MonomialBasis {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "V_n needs n >= 1");
        MonomialBasis { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exponents `(deg z1, deg z2)` of basis vector `k`.
    pub fn exponents(&self, k: usize) -> (usize, usize) {
        assert!(k < self.n, "basis index out of range");
        (self.n - 1 - k, k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).map(|k| self.exponents(k))
    }
}

/// `sigma_n(A)` in double precision.
pub fn sym_power(a: &Mat2, n: usize) -> Result<Matrix<Complex64>> {
    a.require_unimodular()?;
    Ok(sym_power_at(&a.to_scalars::<Complex64>(53), n))
}

/// `sigma_n(A)` for `A` given row-major at any precision. No unimodularity
/// check; the inverse is the adjugate divided by the determinant.
pub fn sym_power_at<S: Scalar>(a: &[S; 4], n: usize) -> Matrix<S> {
    assert!(n >= 1, "sigma_n needs n >= 1");
    let bits = a[0].bits();
    let mut det = a[0].mul_ref(&a[3]);
    det.mul_sub_assign(&a[1], &a[2]);
    let alpha = a[3].div_ref(&det);
    let beta = a[1].neg_ref().div_ref(&det);
    let gamma = a[2].neg_ref().div_ref(&det);
    let delta = a[0].div_ref(&det);

    let first = linear_powers(&alpha, &beta, n, bits);
    let second = linear_powers(&gamma, &delta, n, bits);

    let mut out: Matrix<S> = Matrix::zeros(n, n, bits);
    for k in 0..n {
        let u = &first[n - 1 - k];
        let v = &second[k];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    out[(i + j, k)].mul_add_assign(ui, vj);
                }
            }
        }
    }
    out
}

/// `sigma_n(A^{-1})` from `m = sigma_n(A)` in O(n^2), through the invariant
/// bilinear form `<e_j, e_k> = (-1)^k / C(n-1, k)` for `j + k = n - 1`.
pub fn sym_power_inverse<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "sigma_n(A) is square");
    let bits = m.bits();
    let mut binom = Vec::with_capacity(n);
    binom.push(S::one(bits));
    for i in 1..n {
        let num = S::from_i64((n - i) as i64, bits);
        let den = S::from_i64(i as i64, bits);
        binom.push(binom[i - 1].mul_ref(&num).div_ref(&den));
    }
    let inv: Vec<S> = binom.iter().map(|b| S::one(bits).div_ref(b)).collect();
    Matrix::from_fn(n, n, |i, j| {
        let v = m[(n - 1 - j, n - 1 - i)]
            .mul_ref(&binom[i])
            .mul_ref(&inv[j]);
        if (i + j) % 2 == 1 {
            v.neg_ref()
        } else {
            v
        }
    })
}

/// Coefficient vectors of `(x z1 + y z2)^m` for `m = 0..n`, indexed by the
/// `z2`-degree.
fn linear_powers<S: Scalar>(x: &S, y: &S, n: usize, bits: u32) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(n);
    out.push(vec![S::one(bits)]);
    for m in 1..n {
        let prev = &out[m - 1];
        let mut next = vec![S::zero(bits); m + 1];
        for (j, c) in prev.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[j].mul_add_assign(c, x);
            next[j + 1].mul_add_assign(c, y);
        }
        out.push(next);
    }
    out
}

/// The weights `-n+1, -n+3, ..., n-1` of `sigma_n`.
pub fn weights(n: usize) -> Vec<i64> {
    assert!(n >= 1, "sigma_n needs n >= 1");
    let n = n as i64;
    (0..n).map(|k| 2 * k - n + 1).collect()
}

/// `tr sigma_n(A)`.
pub fn character(a: &Mat2, n: usize) -> Result<Complex64> {
    Ok(sym_power(a, n)?.trace())
}
