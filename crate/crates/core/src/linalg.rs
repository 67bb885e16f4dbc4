//! Small dense linear algebra kernels.
//!
//! Everything in the crate works on matrices of modest dimension (tens, not
//! thousands), so the kernels favor robustness and determinism over speed:
//! a cyclic Jacobi eigensolver for symmetric matrices (orthogonal vectors by
//! construction), LU with partial pivoting for determinants and solves, a
//! complex LU solve for resolvents, and Löwdin (symmetric) orthonormalization.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = entries[i];
        }
        m
    }

    /// Builds from row slices; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Mat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[f64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut m = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    /// Symmetric within `rtol` relative to the largest entry.
    pub fn is_symmetric(&self, rtol: f64) -> bool {
        self.is_square() && self.max_asymmetry() <= rtol * self.max_abs().max(1.0)
    }

    pub fn symmetrized(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_norm(a: &[f64]) -> f64 {
    math::sqrt(dot(a, a))
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted ascending and the matching orthogonal matrix of
/// column eigenvectors. The input is symmetrized first; callers gate on
/// symmetry tolerance themselves.
pub fn sym_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    assert!(a.is_square(), "sym_eigen needs a square matrix");
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Mat::identity(n);
    if n <= 1 {
        return (vec![if n == 1 { m[(0, 0)] } else { 0.0 }; n], v);
    }

    let off = |m: &Mat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[(i, j)] * m[(i, j)];
            }
        }
        math::sqrt(2.0 * s)
    };

    let scale = m.max_abs().max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..64 {
        if off(&m) <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                // smaller-angle root for stability
                let t = {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (theta.abs() + math::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Spectral (operator 2-) norm of a symmetric matrix: max |eigenvalue|.
pub fn sym_op_norm(a: &Mat) -> f64 {
    let (vals, _) = sym_eigen(a);
    vals.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// LU decomposition with partial pivoting; returns (LU, permutation, sign).
fn lu_decompose(a: &Mat) -> Result<(Mat, Vec<usize>, f64)> {
    assert!(a.is_square());
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let mut pivot = k;
        let mut best = lu[(k, k)].abs();
        for i in k + 1..n {
            if lu[(i, k)].abs() > best {
                best = lu[(i, k)].abs();
                pivot = i;
            }
        }
        if best < 1e-300 {
            return Err(Error::SingularMatrix);
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            perm.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..n {
            let factor = lu[(i, k)] / lu[(k, k)];
            lu[(i, k)] = factor;
            for j in k + 1..n {
                lu[(i, j)] -= factor * lu[(k, j)];
            }
        }
    }
    Ok((lu, perm, sign))
}

/// Determinant via LU; returns 0 for numerically singular input.
pub fn det(a: &Mat) -> f64 {
    match lu_decompose(a) {
        Ok((lu, _, sign)) => {
            let mut d = sign;
            for i in 0..a.rows() {
                d *= lu[(i, i)];
            }
            d
        }
        Err(_) => 0.0,
    }
}

/// Solves `A X = B` for square `A`.
pub fn solve(a: &Mat, b: &Mat) -> Result<Mat> {
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    let (lu, perm, _) = lu_decompose(a)?;
    let mut x = Mat::zeros(n, b.cols());
    for col in 0..b.cols() {
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[(perm[i], col)];
            for j in 0..i {
                s -= lu[(i, j)] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}

/// Inverts `z·I − T` for real symmetric `T` and complex `z` (dense complex LU
/// with partial pivoting). Used by the contour projector.
pub fn resolvent_inverse(t: &Mat, z: Complex64) -> Result<Vec<Complex64>> {
    assert!(t.is_square());
    let n = t.rows();
    let mut a: Vec<Complex64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let diag = if i == j { z } else { Complex64::new(0.0, 0.0) };
            a.push(diag - Complex64::new(t[(i, j)], 0.0));
        }
    }
    let mut inv: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        inv[i * n + i] = Complex64::new(1.0, 0.0);
    }

    // forward elimination on [A | I]
    for k in 0..n {
        let mut pivot = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in k + 1..n {
            let mag = a[i * n + k].norm_sqr();
            if mag > best {
                best = mag;
                pivot = i;
            }
        }
        if best < 1e-300 {
            return Err(Error::SingularMatrix);
        }
        if pivot != k {
            for j in 0..n {
                a.swap(k * n + j, pivot * n + j);
                inv.swap(k * n + j, pivot * n + j);
            }
        }
        let pk = a[k * n + k];
        for j in 0..n {
            a[k * n + j] /= pk;
            inv[k * n + j] /= pk;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i * n + k];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                let akj = a[k * n + j];
                let ikj = inv[k * n + j];
                a[i * n + j] -= f * akj;
                inv[i * n + j] -= f * ikj;
            }
        }
    }
    Ok(inv)
}

/// Löwdin (symmetric) orthonormalization `X (XᵀX)^{-1/2}`.
///
/// Unique among orthonormalizations in commuting with right orthogonal
/// action, hence continuous in `X`; fails when the columns are numerically
/// dependent.
pub fn lowdin(x: &Mat) -> Result<Mat> {
    let s = x.transpose().matmul(x);
    let (vals, q) = sym_eigen(&s);
    if vals.iter().any(|&v| v <= 1e-24) {
        return Err(Error::SingularMatrix);
    }
    let inv_sqrt = Mat::from_fn(vals.len(), vals.len(), |i, j| {
        if i == j {
            1.0 / math::sqrt(vals[i])
        } else {
            0.0
        }
    });
    let s_inv_half = q.matmul(&inv_sqrt).matmul(&q.transpose());
    Ok(x.matmul(&s_inv_half))
}

/// Orthonormal basis (columns) of the span of `x`'s columns, assuming full
/// column rank.
pub fn orthonormal_columns(x: &Mat) -> Result<Mat> {
    lowdin(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn random_symmetric(n: usize, seed: u64) -> Mat {
        let mut rng = SeededRng::new(seed);
        let a = Mat::from_fn(n, n, |_, _| rng.uniform(-1.0, 1.0));
        a.symmetrized()
    }

    #[test]
    fn jacobi_diagonal() {
        let (vals, vecs) = sym_eigen(&Mat::diag(&[3.0, 1.0, 2.0]));
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        // permutation matrix
        for j in 0..3 {
            let col = vecs.col(j);
            let ones = col.iter().filter(|x| x.abs() > 0.5).count();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn jacobi_residual_and_orthogonality() {
        for seed in 0..5 {
            let a = random_symmetric(8, seed);
            let (vals, v) = sym_eigen(&a);
            let scale = a.max_abs().max(1.0);
            for j in 0..8 {
                let col = v.col(j);
                let av = a.mul_vec(&col);
                let res: f64 = av
                    .iter()
                    .zip(&col)
                    .map(|(x, y)| (x - vals[j] * y) * (x - vals[j] * y))
                    .sum::<f64>();
                assert!(math::sqrt(res) <= 1e-12 * scale, "residual too big");
            }
            let vtv = v.transpose().matmul(&v);
            assert!(vtv.sub(&Mat::identity(8)).max_abs() < 1e-12);
            // ascending
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn lu_solve_roundtrip() {
        let mut rng = SeededRng::new(7);
        let a = Mat::from_fn(6, 6, |_, _| rng.uniform(-1.0, 1.0));
        let b = Mat::from_fn(6, 2, |_, _| rng.uniform(-1.0, 1.0));
        let x = solve(&a, &b).unwrap();
        assert!(a.matmul(&x).sub(&b).max_abs() < 1e-10);
    }

    #[test]
    fn det_of_known_matrices() {
        assert!((det(&Mat::identity(4)) - 1.0).abs() < 1e-14);
        assert!((det(&Mat::diag(&[2.0, 3.0])) - 6.0).abs() < 1e-13);
        let m = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!((det(&m) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn resolvent_matches_real_inverse() {
        let t = Mat::diag(&[1.0, 2.0, 3.0]);
        let z = Complex64::new(0.0, 1.0);
        let inv = resolvent_inverse(&t, z).unwrap();
        for i in 0..3 {
            let expect = Complex64::new(1.0, 0.0) / (z - (i as f64 + 1.0));
            assert!((inv[i * 3 + i] - expect).norm_sqr() < 1e-24);
        }
    }

    #[test]
    fn lowdin_orthonormalizes() {
        let mut rng = SeededRng::new(3);
        let x = Mat::from_fn(5, 2, |_, _| rng.uniform(-1.0, 1.0));
        let q = lowdin(&x).unwrap();
        let qtq = q.transpose().matmul(&q);
        assert!(qtq.sub(&Mat::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn lowdin_commutes_with_right_orthogonal_action() {
        let mut rng = SeededRng::new(5);
        let x = Mat::from_fn(6, 3, |_, _| rng.uniform(-1.0, 1.0));
        // random orthogonal 3x3 from Löwdin of a random matrix
        let q = lowdin(&Mat::from_fn(3, 3, |_, _| rng.uniform(-1.0, 1.0))).unwrap();
        let lhs = lowdin(&x.matmul(&q)).unwrap();
        let rhs = lowdin(&x).unwrap().matmul(&q);
        assert!(lhs.sub(&rhs).max_abs() < 1e-10);
    }

    #[test]
    fn lowdin_rejects_rank_deficiency() {
        let x = Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(lowdin(&x), Err(Error::SingularMatrix));
    }
}
