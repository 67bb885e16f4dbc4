//! Identification maps between two inner products on the same space.
//!
//! For Gram matrices `G`, `H` of two inner products in a shared basis, the
//! transfer map `a = G⁻¹H` satisfies `g(a v, w) = h(v, w)`; it is
//! self-adjoint and positive in both inner products but generally not
//! symmetric in the ambient basis. Its principal inverse square root
//! `b = a^{−1/2}` carries g-orthonormal frames to h-orthonormal frames, and
//! the quartic-root volume ratio `f = (det H / det G)^{1/4}` relates the two
//! volume normalizations. `a` and `f` are cocyclic across three metrics; `b`
//! is cocyclic exactly when the transfer maps commute.

use crate::error::{Error, Result};
use crate::linalg::{det, solve, sym_eigen, Mat};
use crate::math;

/// Gram matrices of two inner products, validated symmetric positive
/// definite.
#[derive(Debug, Clone)]
pub struct MetricPair {
    g: Mat,
    h: Mat,
}

const SPD_MIN_EIG: f64 = 1e-12;

impl MetricPair {
    pub fn new(g: Mat, h: Mat) -> Result<Self> {
        if g.rows() != h.rows() || !g.is_square() || !h.is_square() {
            return Err(Error::DimensionMismatch { expected: g.rows(), got: h.rows() });
        }
        for m in [&g, &h] {
            if !m.is_symmetric(1e-12) {
                return Err(Error::NotSymmetric { max_asymmetry: m.max_asymmetry() });
            }
            let (vals, _) = sym_eigen(m);
            if vals[0] <= SPD_MIN_EIG {
                return Err(Error::NotPositiveDefinite { min_eigenvalue: vals[0] });
            }
        }
        Ok(MetricPair { g, h })
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn g(&self) -> &Mat {
        &self.g
    }

    pub fn h(&self) -> &Mat {
        &self.h
    }

    pub fn swapped(&self) -> MetricPair {
        MetricPair { g: self.h.clone(), h: self.g.clone() }
    }

    /// `G^{±1/2}` via the eigendecomposition of `G`.
    fn g_half_powers(&self) -> (Mat, Mat) {
        let (vals, q) = sym_eigen(&self.g);
        let n = self.dim();
        let half = Mat::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * q[(j, k)] * math::sqrt(vals[k])).sum()
        });
        let inv_half = Mat::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * q[(j, k)] / math::sqrt(vals[k])).sum()
        });
        (half, inv_half)
    }
}

/// The transfer map `a = G⁻¹H`.
pub fn a_map(p: &MetricPair) -> Mat {
    solve(p.g(), p.h()).expect("validated SPD matrix cannot be singular")
}

/// Principal inverse square root `b = a^{−1/2}`, computed in the g-inner
/// product: with `M = G^{−1/2} H G^{−1/2}`, `b = G^{−1/2} M^{−1/2} G^{1/2}`.
///
/// Equivalent to solving the symmetric generalized problem `H v = λ G v`,
/// which avoids matrix functions of the non-symmetric `a` itself.
pub fn b_map(p: &MetricPair) -> Mat {
    let (g_half, g_inv_half) = p.g_half_powers();
    let m = g_inv_half.matmul(p.h()).matmul(&g_inv_half).symmetrized();
    let (vals, q) = sym_eigen(&m);
    let n = p.dim();
    let m_inv_half = Mat::from_fn(n, n, |i, j| {
        (0..n).map(|k| q[(i, k)] * q[(j, k)] / math::sqrt(vals[k])).sum()
    });
    g_inv_half.matmul(&m_inv_half).matmul(&g_half)
}

/// Carries a frame with g-orthonormal columns to an h-orthonormal frame by
/// applying `b` columnwise.
pub fn frame_transform(p: &MetricPair, frame: &Mat) -> Result<Mat> {
    let gram = frame.transpose().matmul(p.g()).matmul(frame);
    let residual = gram.sub(&Mat::identity(frame.cols())).max_abs();
    if residual > 1e-10 {
        return Err(Error::NotOrthonormal { residual });
    }
    let out = b_map(p).matmul(frame);
    let out_gram = out.transpose().matmul(p.h()).matmul(&out);
    let out_residual = out_gram.sub(&Mat::identity(frame.cols())).max_abs();
    debug_assert!(out_residual <= 1e-9, "output frame not h-orthonormal ({out_residual:e})");
    Ok(out)
}

/// Volume factor `(det H / det G)^{1/4}`.
pub fn volume_factor(p: &MetricPair) -> f64 {
    math::powf(det(p.h()) / det(p.g()), 0.25)
}

/// Residuals of the defining and structural identities of one metric pair,
/// reported together for auditing.
#[derive(Debug, Clone)]
pub struct IdentificationResiduals {
    /// `‖G·a − H‖` (defining equation).
    pub defining: f64,
    /// `‖(G a)ᵀ − G a‖`: g-self-adjointness of `a`.
    pub g_self_adjoint: f64,
    /// `‖(H a)ᵀ − H a‖`: h-self-adjointness of `a`.
    pub h_self_adjoint: f64,
    /// `‖b² a − I‖`.
    pub inverse_sqrt: f64,
    /// `‖a(G,H)·a(H,G) − I‖`.
    pub inverse_pair: f64,
    /// Smallest eigenvalue of the symmetrized `G·a` (positivity witness).
    pub positivity: f64,
}

pub fn identification_residuals(p: &MetricPair) -> IdentificationResiduals {
    let a = a_map(p);
    let b = b_map(p);
    let ga = p.g().matmul(&a);
    let ha = p.h().matmul(&a);
    let eye = Mat::identity(p.dim());
    let back = a_map(&p.swapped());
    let (pos_vals, _) = sym_eigen(&ga.symmetrized());
    IdentificationResiduals {
        defining: ga.sub(p.h()).max_abs(),
        g_self_adjoint: ga.max_asymmetry(),
        h_self_adjoint: ha.max_asymmetry(),
        inverse_sqrt: b.matmul(&b).matmul(&a).sub(&eye).max_abs(),
        inverse_pair: a.matmul(&back).sub(&eye).max_abs(),
        positivity: pos_vals[0],
    }
}
