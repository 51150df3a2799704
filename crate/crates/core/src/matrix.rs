//! Dense complex matrices over any [`Scalar`].
//!
//! Storage is row-major. The routines here are the small set the twisted
//! complex needs: products, LU determinants with a 1-norm condition
//! estimate, complete-pivoting column selection and singular values by
//! one-sided Jacobi rotations.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::scalar::{LogComplex, Scalar};
use crate::tolerance::unit_roundoff;

#[derive(Clone, PartialEq)]
pub struct Matrix<S = Complex64> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize, bits: u32) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(bits); rows * cols],
        }
    }

    pub fn identity(n: usize, bits: u32) -> Self {
        let mut m = Self::zeros(n, n, bits);
        for i in 0..n {
            m[(i, i)] = S::one(bits);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from row-major `f64` complex entries.
    pub fn from_c64(rows: usize, cols: usize, entries: &[Complex64], bits: u32) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count does not match shape"
        );
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&z| S::from_c64(z, bits)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Working precision of the entries (53 for an empty matrix).
    pub fn bits(&self) -> u32 {
        self.data.first().map_or(53, S::bits)
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_c64(&self) -> Matrix<Complex64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(S::to_c64).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj_ref())
    }

    pub fn matmul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out: Matrix<S> = Matrix::zeros(self.rows, rhs.cols, self.bits());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let brow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    o.mul_add_assign(a, b);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(
            self.cols,
            v.len(),
            "vector length differs from column count"
        );
        let bits = self.bits();
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero(bits);
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc.mul_add_assign(a, x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), rhs.shape(), "shapes differ");
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&rhs.data) {
            o.add_assign_ref(b);
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), rhs.shape(), "shapes differ");
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&rhs.data) {
            o.sub_assign_ref(b);
        }
        out
    }

    pub fn neg(&self) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(S::neg_ref).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.mul_ref(c)).collect(),
        }
    }

    /// `[self ; below]`
    pub fn vstack(&self, below: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, below.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Matrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// `[self | right]`
    pub fn hstack(&self, right: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.rows, right.rows, "row counts differ");
        Matrix::from_fn(self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                right[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix<S> {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix<S> {
        Matrix::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square(), "trace of a non-square matrix");
        let mut acc = S::zero(self.bits());
        for i in 0..self.rows {
            acc.add_assign_ref(&self[(i, i)]);
        }
        acc
    }

    /// Natural log of the Frobenius norm; `-inf` for the zero matrix.
    pub fn ln_frobenius(&self) -> f64 {
        ln_norm2(&self.data)
    }

    pub fn frobenius(&self) -> f64 {
        self.ln_frobenius().exp()
    }

    /// Natural log of the 1-norm (largest column sum of moduli).
    pub fn ln_norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| ln_norm1(&self.column(j)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.ln_abs())
            .fold(f64::NEG_INFINITY, f64::max)
            .exp()
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Lu<S> {
        assert!(self.is_square(), "LU of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let mut singular = false;
        for k in 0..n {
            let mut best = k;
            let mut best_key = f64::NEG_INFINITY;
            for i in k..n {
                let key = a[(i, k)].magnitude_key();
                if key > best_key {
                    best_key = key;
                    best = i;
                }
            }
            if a[(best, k)].is_zero() {
                singular = true;
                continue;
            }
            if best != k {
                a.swap_rows(best, k);
                perm.swap(best, k);
                odd = !odd;
            }
            let (head, tail) = a.data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            let pivot = &pivot_row[k];
            for r in 0..(n - k - 1) {
                let row = &mut tail[r * n..(r + 1) * n];
                if row[k].is_zero() {
                    continue;
                }
                let l = row[k].div_ref(pivot);
                for j in (k + 1)..n {
                    if !pivot_row[j].is_zero() {
                        row[j].mul_sub_assign(&l, &pivot_row[j]);
                    }
                }
                row[k] = l;
            }
        }
        Lu {
            factors: a,
            perm,
            odd,
            singular,
            ln_norm1: self.ln_norm1(),
        }
    }

    /// Determinant in log form.
    pub fn log_det(&self) -> LogComplex {
        self.lu().log_det()
    }

    /// Gaussian elimination with complete pivoting.
    ///
    /// Runs until the remaining block is exactly zero or exhausted and
    /// records every pivot, so the caller can decide the numerical rank.
    pub fn complete_pivoting(&self) -> PivotedElimination {
        let (m, n) = self.shape();
        let mut a = self.clone();
        let mut row_of: Vec<usize> = (0..m).collect();
        let mut col_of: Vec<usize> = (0..n).collect();
        let mut rows = Vec::new();
        let mut columns = Vec::new();
        let mut ln_pivots = Vec::new();
        for k in 0..m.min(n) {
            let mut best = (k, k);
            let mut best_key = f64::NEG_INFINITY;
            for i in k..m {
                for j in k..n {
                    let key = a[(i, j)].magnitude_key();
                    if key > best_key {
                        best_key = key;
                        best = (i, j);
                    }
                }
            }
            if a[best].is_zero() {
                break;
            }
            a.swap_rows(k, best.0);
            row_of.swap(k, best.0);
            a.swap_columns(k, best.1);
            col_of.swap(k, best.1);
            rows.push(row_of[k]);
            columns.push(col_of[k]);
            ln_pivots.push(a[(k, k)].ln_abs());
            let (head, tail) = a.data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            let pivot = &pivot_row[k];
            for r in 0..(m - k - 1) {
                let row = &mut tail[r * n..(r + 1) * n];
                if row[k].is_zero() {
                    continue;
                }
                let l = row[k].div_ref(pivot);
                for j in (k + 1)..n {
                    if !pivot_row[j].is_zero() {
                        row[j].mul_sub_assign(&l, &pivot_row[j]);
                    }
                }
                row[k] = S::zero(pivot.bits());
            }
        }
        PivotedElimination {
            rows,
            columns,
            ln_pivots,
        }
    }

    /// Natural logs of the singular values, in decreasing order.
    ///
    /// Column-pivoted Householder QR on the side with fewer vectors, then
    /// one-sided Jacobi (Hestenes) on the rows of `R`. The preconditioning
    /// cuts the sweep count on strongly graded matrices several times over.
    pub fn ln_singular_values(&self) -> Vec<f64> {
        let (m, n) = self.shape();
        let cols: Vec<Vec<S>> = if n <= m {
            (0..n).map(|j| self.column(j)).collect()
        } else {
            (0..m)
                .map(|i| self.row(i).iter().map(S::conj_ref).collect())
                .collect()
        };
        let bits = self.bits();
        let mut vecs = pivoted_qr_rows(cols, bits);
        let tol = unit_roundoff(bits).ln() + (m.max(n) as f64).ln();
        let k = vecs.len();
        for _sweep in 0..80 {
            let mut rotated = false;
            // Squared norms, refreshed each sweep and updated per rotation.
            let mut norms: Vec<S> = vecs.iter().map(|v| norm_sqr(v, bits)).collect();
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &b| {
                norms[b]
                    .magnitude_key()
                    .total_cmp(&norms[a].magnitude_key())
            });
            vecs = order
                .iter()
                .map(|&i| std::mem::take(&mut vecs[i]))
                .collect();
            norms = order.iter().map(|&i| norms[i].clone()).collect();
            for i in 0..k {
                for j in (i + 1)..k {
                    rotated |= jacobi_rotate(&mut vecs, &mut norms, i, j, tol, bits);
                }
            }
            if !rotated {
                break;
            }
        }
        let mut out: Vec<f64> = vecs.iter().map(|v| ln_norm2(v)).collect();
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.ln_singular_values()
            .into_iter()
            .map(f64::exp)
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for i in 0..self.rows {
            self.data.swap(i * c + a, i * c + b);
        }
    }
}

/// Orthogonalize `vecs[i]` against `vecs[j]`; returns whether a rotation was
/// applied.
fn jacobi_rotate<S: Scalar>(
    vecs: &mut [Vec<S>],
    norms: &mut [S],
    i: usize,
    j: usize,
    ln_tol: f64,
    bits: u32,
) -> bool {
    let (lo, hi) = vecs.split_at_mut(j);
    let (ai, aj) = (&mut lo[i], &mut hi[0]);
    let (alpha, beta) = (norms[i].clone(), norms[j].clone());
    if alpha.is_zero() || beta.is_zero() {
        return false;
    }
    let mut gamma = S::zero(bits);
    for (x, y) in ai.iter().zip(aj.iter()) {
        gamma.conj_mul_add_assign(x, y);
    }
    if gamma.is_zero() {
        return false;
    }
    let ln_g = gamma.ln_abs();
    if ln_g <= ln_tol + 0.5 * (alpha.ln_abs() + beta.ln_abs()) {
        return false;
    }
    let g_abs = gamma.abs_ref();
    let phase_conj = g_abs.div_ref(&gamma); // e^{-i phi}
    let two = S::from_i64(2, bits);
    let one = S::one(bits);
    let mut diff = beta.clone();
    diff.sub_assign_ref(&alpha);
    let zeta = diff.div_ref(&two.mul_ref(&g_abs));
    let mut root = zeta.mul_ref(&zeta);
    root.add_assign_ref(&one);
    let root = root.sqrt_ref();
    let zeta_abs = zeta.abs_ref();
    let mut denom = zeta_abs.clone();
    denom.add_assign_ref(&root);
    let mut t = one.div_ref(&denom);
    if zeta.re_is_negative() {
        t = t.neg_ref();
    }
    let mut ct = t.mul_ref(&t);
    ct.add_assign_ref(&one);
    let c = one.div_ref(&ct.sqrt_ref());
    let s = c.mul_ref(&t);
    let neg_s = s.neg_ref();
    // c and s are real: rotate x against e^{-i phi} y.
    for (x, y) in ai.iter_mut().zip(aj.iter_mut()) {
        let yp = y.mul_ref(&phase_conj);
        let mut nx = S::zero(bits);
        nx.real_mul_add_assign(&c, x);
        nx.real_mul_add_assign(&neg_s, &yp);
        let mut ny = S::zero(bits);
        ny.real_mul_add_assign(&s, x);
        ny.real_mul_add_assign(&c, &yp);
        *x = nx;
        *y = ny;
    }
    let shift = t.mul_ref(&g_abs);
    norms[i].sub_assign_ref(&shift);
    norms[j].add_assign_ref(&shift);
    true
}

fn norm_sqr<S: Scalar>(v: &[S], bits: u32) -> S {
    let mut acc = S::zero(bits);
    for z in v {
        acc.add_assign_ref(&z.norm_sqr_ref());
    }
    acc
}

/// Householder QR with column pivoting of the given columns (all of one
/// length `L`, at least as many rows as columns). Returns the rows of `R`.
fn pivoted_qr_rows<S: Scalar>(mut cols: Vec<Vec<S>>, bits: u32) -> Vec<Vec<S>> {
    let k = cols.len();
    let len = cols.first().map_or(0, Vec::len);
    let steps = k.min(len);
    let two = S::from_i64(2, bits);
    for j in 0..steps {
        let norms: Vec<S> = cols[j..]
            .iter()
            .map(|c| {
                let mut acc = S::zero(bits);
                for z in &c[j..] {
                    acc.add_assign_ref(&z.norm_sqr_ref());
                }
                acc
            })
            .collect();
        let best = (0..norms.len())
            .max_by(|&a, &b| {
                norms[a]
                    .magnitude_key()
                    .total_cmp(&norms[b].magnitude_key())
            })
            .unwrap();
        if norms[best].is_zero() {
            break;
        }
        cols.swap(j, j + best);
        let (done, rest) = cols.split_at_mut(j + 1);
        let v = &mut done[j];
        let nrm = norms[best].sqrt_ref();
        let x0_abs = v[j].abs_ref();
        let phase = if x0_abs.is_zero() {
            S::one(bits)
        } else {
            v[j].div_ref(&x0_abs)
        };
        // v = x - alpha e_j with alpha = -phase |x|, so v_j = phase (|x_j| + |x|).
        let mut head = x0_abs.clone();
        head.add_assign_ref(&nrm);
        let vhv = two.mul_ref(&nrm).mul_ref(&head);
        v[j] = phase.mul_ref(&head);
        for c in rest.iter_mut() {
            let mut w = S::zero(bits);
            for (vi, ci) in v[j..].iter().zip(&c[j..]) {
                w.conj_mul_add_assign(vi, ci);
            }
            if w.is_zero() {
                continue;
            }
            let f = two.mul_ref(&w).div_ref(&vhv);
            for (vi, ci) in v[j..].iter().zip(c[j..].iter_mut()) {
                ci.mul_sub_assign(&f, vi);
            }
        }
        v[j] = phase.mul_ref(&nrm).neg_ref();
    }
    (0..steps)
        .map(|r| {
            (0..k)
                .map(|c| {
                    if c >= r {
                        cols[c][r].clone()
                    } else {
                        S::zero(bits)
                    }
                })
                .collect()
        })
        .collect()
}

fn ln_norm2<S: Scalar>(v: &[S]) -> f64 {
    let Some(first) = v.first() else {
        return f64::NEG_INFINITY;
    };
    let mut acc = S::zero(first.bits());
    for z in v {
        acc.add_assign_ref(&z.norm_sqr_ref());
    }
    0.5 * acc.ln_abs()
}

fn ln_norm1<S: Scalar>(v: &[S]) -> f64 {
    let Some(first) = v.first() else {
        return f64::NEG_INFINITY;
    };
    let mut acc = S::zero(first.bits());
    for z in v {
        acc.add_assign_ref(&z.abs_ref());
    }
    acc.ln_abs()
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Packed LU factors `P A = L U` of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu<S> {
    factors: Matrix<S>,
    perm: Vec<usize>,
    odd: bool,
    singular: bool,
    ln_norm1: f64,
}

impl<S: Scalar> Lu<S> {
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn log_det(&self) -> LogComplex {
        if self.singular {
            return LogComplex::ZERO;
        }
        let n = self.factors.rows();
        let diag: Vec<S> = (0..n).map(|i| self.factors[(i, i)].clone()).collect();
        let d = S::log_product(&diag);
        if self.odd {
            d.neg()
        } else {
            d
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.factors.rows();
        let f = &self.factors;
        let mut x: Vec<S> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for k in 0..i {
                if !f[(i, k)].is_zero() {
                    let xk = x[k].clone();
                    x[i].mul_sub_assign(&f[(i, k)], &xk);
                }
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                if !f[(i, k)].is_zero() {
                    let xk = x[k].clone();
                    x[i].mul_sub_assign(&f[(i, k)], &xk);
                }
            }
            x[i] = x[i].div_ref(&f[(i, i)]);
        }
        x
    }

    /// Solve `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[S]) -> Vec<S> {
        let n = self.factors.rows();
        let f = &self.factors;
        let mut y: Vec<S> = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                if !f[(k, i)].is_zero() {
                    let yk = y[k].clone();
                    y[i].mul_sub_assign(&f[(k, i)].conj_ref(), &yk);
                }
            }
            y[i] = y[i].div_ref(&f[(i, i)].conj_ref());
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                if !f[(k, i)].is_zero() {
                    let yk = y[k].clone();
                    y[i].mul_sub_assign(&f[(k, i)].conj_ref(), &yk);
                }
            }
        }
        let mut x = vec![S::zero(self.factors.bits()); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i].clone();
        }
        x
    }

    /// Natural log of an estimate of the 1-norm condition number
    /// (Hager's method, as refined by Higham); `+inf` when singular.
    pub fn ln_condition_estimate(&self) -> f64 {
        if self.singular {
            return f64::INFINITY;
        }
        let n = self.factors.rows();
        let bits = self.factors.bits();
        let inv_n = S::one(bits).div_ref(&S::from_i64(n as i64, bits));
        let mut x = vec![inv_n; n];
        let mut estimate = f64::NEG_INFINITY;
        let mut last_j = usize::MAX;
        for iter in 0..5 {
            let y = self.solve(&x);
            estimate = estimate.max(ln_norm1(&y));
            let xi: Vec<S> = y
                .iter()
                .map(|v| {
                    if v.is_zero() {
                        S::one(bits)
                    } else {
                        v.div_ref(&v.abs_ref())
                    }
                })
                .collect();
            let z = self.solve_adjoint(&xi);
            let (j, zj) = z.iter().enumerate().map(|(j, v)| (j, v.ln_abs())).fold(
                (0, f64::NEG_INFINITY),
                |acc, c| if c.1 > acc.1 { c } else { acc },
            );
            let mut ztx = S::zero(bits);
            for (a, b) in z.iter().zip(&x) {
                ztx.mul_add_assign(&a.conj_ref(), b);
            }
            let ln_ztx = if ztx.re_is_negative() {
                f64::NEG_INFINITY
            } else {
                ztx.ln_abs()
            };
            if iter > 0 && (zj <= ln_ztx || j == last_j) {
                break;
            }
            last_j = j;
            x = vec![S::zero(bits); n];
            x[j] = S::one(bits);
        }
        // Higham's alternating test vector guards against underestimates.
        let alt: Vec<S> = (0..n)
            .map(|i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                S::from_c64(
                    Complex64::new(
                        sign as f64 * (1.0 + i as f64 / (n as f64 - 1.0).max(1.0)),
                        0.0,
                    ),
                    bits,
                )
            })
            .collect();
        let y = self.solve(&alt);
        let alt_est = ln_norm1(&y) + (2.0 / (3.0 * n as f64)).ln();
        self.ln_norm1 + estimate.max(alt_est)
    }
}

/// Outcome of [`Matrix::complete_pivoting`].
#[derive(Clone, Debug, PartialEq)]
pub struct PivotedElimination {
    /// Pivot rows, in elimination order.
    pub rows: Vec<usize>,
    /// Pivot columns, in elimination order.
    pub columns: Vec<usize>,
    /// `ln |pivot|`, in elimination order.
    pub ln_pivots: Vec<f64>,
}

impl PivotedElimination {
    /// Number of pivots whose log-magnitude exceeds `ln_threshold`.
    pub fn rank_above(&self, ln_threshold: f64) -> usize {
        self.ln_pivots
            .iter()
            .take_while(|&&p| p > ln_threshold)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_of_small_matrices() {
        let a: Matrix = Matrix::from_c64(
            2,
            2,
            &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
            53,
        );
        let d = a.log_det().to_c64().unwrap();
        assert!((d - c(-2.0, 0.0)).norm() < 1e-14);
        let b: Matrix = Matrix::from_c64(
            3,
            3,
            &[
                c(0.0, 0.0),
                c(0.0, 1.0),
                c(2.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(3.0, 0.0),
                c(1.0, -1.0),
            ],
            53,
        );
        // Expansion along the second row: -1 * det[[i, 2], [3, 1 - i]].
        let expect = -(c(0.0, 1.0) * c(1.0, -1.0) - c(6.0, 0.0));
        assert!((b.log_det().to_c64().unwrap() - expect).norm() < 1e-13);
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        let a: Matrix = Matrix::from_c64(
            2,
            2,
            &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)],
            53,
        );
        assert!(a.log_det().is_zero());
    }

    #[test]
    fn lu_solves_and_adjoint_solves() {
        let entries: Vec<Complex64> = (0..16)
            .map(|k| c((k * 7 % 5) as f64 + 0.5, (k % 3) as f64 - 1.0))
            .collect();
        let a: Matrix = Matrix::from_c64(4, 4, &entries, 53);
        let lu = a.lu();
        let b = vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0), c(3.0, 0.0)];
        let x = lu.solve(&b);
        for (r, bi) in a.matvec(&x).iter().zip(&b) {
            assert!((r - bi).norm() < 1e-12);
        }
        let y = lu.solve_adjoint(&b);
        for (r, bi) in a.conj_transpose().matvec(&y).iter().zip(&b) {
            assert!((r - bi).norm() < 1e-12);
        }
    }

    #[test]
    fn condition_estimate_is_exact_on_diagonals() {
        let a: Matrix = Matrix::from_c64(
            3,
            3,
            &[
                c(1e6, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1e-3, 0.0),
            ],
            53,
        );
        let est = a.lu().ln_condition_estimate().exp();
        assert!((est / 1e9 - 1.0).abs() < 1e-9, "{est}");
    }

    #[test]
    fn complete_pivoting_picks_largest_entries() {
        let a: Matrix = Matrix::from_c64(
            2,
            4,
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(5.0, 0.0),
                c(0.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 0.0),
                c(10.0, 0.0),
                c(0.0, 0.0),
            ],
            53,
        );
        let e = a.complete_pivoting();
        assert_eq!(e.columns[0], 2);
        assert_eq!(e.rows[0], 1);
        // The remaining block is exactly zero: rank one.
        assert_eq!(e.columns.len(), 1);
    }

    #[test]
    fn singular_values_of_a_known_matrix() {
        // [[3, 0], [4, 5]] has singular values sqrt(45) and sqrt(5).
        let a: Matrix = Matrix::from_c64(
            2,
            2,
            &[c(3.0, 0.0), c(0.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)],
            53,
        );
        let s = a.singular_values();
        assert!((s[0] - 45f64.sqrt()).abs() < 1e-13);
        assert!((s[1] - 5f64.sqrt()).abs() < 1e-13);
        let wide = a.hstack(&Matrix::zeros(2, 1, 53));
        assert_eq!(wide.singular_values().len(), 2);
    }

    #[test]
    fn multiprecision_agrees_with_double() {
        let entries: Vec<Complex64> = (0..25)
            .map(|k| c(((k * 13) % 7) as f64 - 3.0, ((k * 5) % 4) as f64))
            .collect();
        let a: Matrix = Matrix::from_c64(5, 5, &entries, 53);
        let b: Matrix<crate::scalar::MpComplex> = Matrix::from_c64(5, 5, &entries, 200);
        let (d1, d2) = (a.log_det(), b.log_det());
        assert!(d1.relative_difference(d2) < 1e-12);
        let (s1, s2) = (a.ln_singular_values(), b.ln_singular_values());
        for (x, y) in s1.iter().zip(&s2) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
