//! Orthogonal projectors onto interval spectral subspaces.
//!
//! Two routes: summing eigenvector dyads directly, and quadrature of the
//! resolvent line integral `(2πi)⁻¹ ∮ (z−T)⁻¹ dz` over the circle through
//! the interval endpoints (counterclockwise; the orientation is our
//! convention, fixed so a diagonal test yields the projector rather than its
//! negative). The trapezoid rule on this analytic periodic integrand
//! converges geometrically in the node count.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{eigen_decompose, OperatorFamily};
use crate::linalg::{resolvent_inverse, sym_op_norm, Mat};
use crate::math;

/// Minimal admissible distance from an interval endpoint to the spectrum.
pub const GAP_TOL: f64 = 1e-8;

/// Orthogonal projector onto the spectral subspace of an interval.
#[derive(Debug, Clone)]
pub struct IntervalProjector {
    pub matrix: Mat,
    pub rank: usize,
    pub interval: (f64, f64),
    /// Min distance from either endpoint to the spectrum of the source
    /// operator; kept so downstream sign-stability reasoning is auditable.
    pub gap_margin: f64,
}

fn endpoint_gap(values: &[f64], lo: f64, hi: f64) -> Result<f64> {
    let mut margin = f64::INFINITY;
    for &v in values {
        for endpoint in [lo, hi] {
            let d = (v - endpoint).abs();
            if d <= GAP_TOL {
                return Err(Error::EndpointHitsSpectrum { endpoint, eigenvalue: v });
            }
            margin = margin.min(d);
        }
    }
    Ok(margin)
}

/// Projector by direct eigendecomposition: the sum of `v vᵀ` over eigenpairs
/// with eigenvalue inside `(lo, hi)`.
pub fn project_direct(t: &Mat, lo: f64, hi: f64) -> Result<IntervalProjector> {
    assert!(lo < hi, "interval endpoints out of order");
    let sys = eigen_decompose(t)?;
    let gap_margin = endpoint_gap(&sys.values, lo, hi)?;
    let n = sys.values.len();
    let mut p = Mat::zeros(n, n);
    let mut rank = 0usize;
    for (j, &v) in sys.values.iter().enumerate() {
        if v > lo && v < hi {
            rank += 1;
            let col = sys.vectors.col(j);
            for a in 0..n {
                for b in 0..n {
                    p[(a, b)] += col[a] * col[b];
                }
            }
        }
    }
    Ok(IntervalProjector { matrix: p.symmetrized(), rank, interval: (lo, hi), gap_margin })
}

/// Projector by resolvent quadrature over the circle centered at the
/// interval midpoint through its endpoints, with `nodes` trapezoid nodes.
///
/// The imaginary part of the quadrature must vanish (asserted to 1e−8); the
/// real part is reported. Rank is read off the trace.
pub fn project_contour(t: &Mat, lo: f64, hi: f64, nodes: usize) -> Result<IntervalProjector> {
    assert!(lo < hi, "interval endpoints out of order");
    assert!(nodes >= 8, "need at least 8 quadrature nodes");
    let sys = eigen_decompose(t)?;
    let gap_margin = endpoint_gap(&sys.values, lo, hi)?;
    let n = t.rows();
    let center = 0.5 * (lo + hi);
    let radius = 0.5 * (hi - lo);

    // P = (2πi)⁻¹ ∮ (z−T)⁻¹ dz ≈ (r/M) Σ_j e^{iθ_j} (z_j − T)⁻¹,
    // z_j on the circle, equal weights (trapezoid on a periodic integrand).
    // Nodes are summed in a fixed order for reproducibility.
    let mut sum: Vec<Complex64> = alloc::vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..nodes {
        let theta = 2.0 * math::PI * j as f64 / nodes as f64;
        let phase = Complex64::new(math::cos(theta), math::sin(theta));
        let z = Complex64::new(center, 0.0) + phase * radius;
        let inv = resolvent_inverse(t, z).map_err(|_| Error::ResolventSingular { node: j })?;
        for (acc, val) in sum.iter_mut().zip(&inv) {
            *acc += phase * val;
        }
    }
    let scale = radius / nodes as f64;
    let mut p = Mat::zeros(n, n);
    let mut max_imag = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let v = sum[a * n + b] * scale;
            p[(a, b)] = v.re;
            max_imag = max_imag.max(v.im.abs());
        }
    }
    assert!(
        max_imag <= 1e-8,
        "imaginary part of the contour quadrature failed to cancel ({max_imag:e})"
    );
    let rank = libm::round(p.trace()) as usize;
    Ok(IntervalProjector { matrix: p.symmetrized(), rank, interval: (lo, hi), gap_margin })
}

/// Interval projectors along a closed loop of operators, checked to keep a
/// spectral gap at both endpoints and constant rank throughout; consecutive
/// projectors must stay within operator-norm distance 1.
pub fn constant_rank_loop(
    fam: &OperatorFamily,
    lo: f64,
    hi: f64,
    n_intervals: usize,
) -> Result<Vec<IntervalProjector>> {
    if !fam.is_loop() {
        return Err(Error::NotALoop);
    }
    assert!(n_intervals >= 2);
    let mut projectors = Vec::with_capacity(n_intervals + 1);
    for i in 0..=n_intervals {
        let t = fam.evaluate(i as f64 / n_intervals as f64);
        let p = project_direct(&t, lo, hi).map_err(|e| match e {
            Error::EndpointHitsSpectrum { eigenvalue, endpoint } => Error::GapViolated {
                sample: i,
                margin: (eigenvalue - endpoint).abs(),
            },
            other => other,
        })?;
        projectors.push(p);
    }
    let rank = projectors[0].rank;
    for (i, p) in projectors.iter().enumerate() {
        if p.rank != rank {
            return Err(Error::RankChanged { sample: i, expected: rank, got: p.rank });
        }
    }
    for i in 0..n_intervals {
        let step = sym_op_norm(&projectors[i + 1].matrix.sub(&projectors[i].matrix));
        if step >= 1.0 {
            return Err(Error::LoopSamplingTooCoarse { step: i });
        }
    }
    Ok(projectors)
}

/// Residuals of the projector contract against its source operator.
#[derive(Debug, Clone)]
pub struct ProjectorResiduals {
    pub idempotency: f64,
    pub symmetry: f64,
    pub commutation: f64,
    pub trace_vs_rank: f64,
}

pub fn projector_residuals(p: &IntervalProjector, t: &Mat) -> ProjectorResiduals {
    let m = &p.matrix;
    ProjectorResiduals {
        idempotency: m.matmul(m).sub(m).max_abs(),
        symmetry: m.max_asymmetry(),
        commutation: m.matmul(t).sub(&t.matmul(m)).max_abs(),
        trace_vs_rank: (m.trace() - p.rank as f64).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::random_symmetric;
    use crate::rng::SeededRng;
    use alloc::vec;

    #[test]
    fn direct_diagonal_case() {
        let p = project_direct(&Mat::diag(&[1.0, 2.0, 3.0]), 1.5, 3.5).unwrap();
        assert_eq!(p.rank, 2);
        assert!(p.matrix.sub(&Mat::diag(&[0.0, 1.0, 1.0])).max_abs() < 1e-12);
        assert!((p.gap_margin - 0.5).abs() < 1e-12);
    }

    #[test]
    fn direct_full_interval_is_identity() {
        let mut rng = SeededRng::new(1);
        let t = random_symmetric(5, &mut rng).scale(0.4);
        let p = project_direct(&t, -10.0, 10.0).unwrap();
        assert_eq!(p.rank, 5);
        assert!(p.matrix.sub(&Mat::identity(5)).max_abs() < 1e-10);
    }

    #[test]
    fn direct_rejects_endpoint_on_spectrum() {
        let err = project_direct(&Mat::diag(&[1.0, 2.0]), 1.0 + 1e-12, 3.0).unwrap_err();
        assert!(matches!(err, Error::EndpointHitsSpectrum { .. }));
    }

    #[test]
    fn direct_invariants_on_random_matrix() {
        let mut rng = SeededRng::new(17);
        let t = random_symmetric(8, &mut rng).scale(3.0);
        let sys = eigen_decompose(&t).unwrap();
        // interval around the 3 middle eigenvalues (indices 2, 3, 4)
        let lo = 0.5 * (sys.values[2] + sys.values[1]);
        let hi = 0.5 * (sys.values[4] + sys.values[5]);
        let p = project_direct(&t, lo, hi).unwrap();
        assert_eq!(p.rank, 3);
        let res = projector_residuals(&p, &t);
        assert!(res.idempotency < 1e-8);
        assert!(res.symmetry < 1e-8);
        assert!(res.commutation < 1e-8);
        assert!(res.trace_vs_rank < 1e-8);
    }

    #[test]
    fn contour_matches_direct_on_diagonal() {
        let t = Mat::diag(&[1.0, 2.0, 3.0]);
        // circle center 2.5 radius 1 encloses exactly {2, 3}
        let direct = project_direct(&t, 1.5, 3.5).unwrap();
        let contour = project_contour(&t, 1.5, 3.5, 64).unwrap();
        assert_eq!(contour.rank, 2);
        assert!(contour.matrix.sub(&direct.matrix).frob_norm() < 1e-8);
    }

    #[test]
    fn contour_empty_interval_is_zero() {
        let t = Mat::diag(&[1.0, 5.0]);
        let p = project_contour(&t, 2.0, 4.0, 64).unwrap();
        assert_eq!(p.rank, 0);
        assert!(p.matrix.max_abs() < 1e-10);
    }

    #[test]
    fn contour_converges_geometrically() {
        let mut rng = SeededRng::new(5);
        let q = crate::linalg::orthonormal_columns(&random_symmetric(6, &mut rng)).unwrap();
        // three eigenvalues well inside [-1,1], three far outside
        let levels = [-2.9, -2.2, -0.55, 0.1, 0.5, 2.6];
        let t = q.matmul(&Mat::diag(&levels)).matmul(&q.transpose()).symmetrized();
        let direct = project_direct(&t, -1.0, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for nodes in [16usize, 32, 64] {
            let contour = project_contour(&t, -1.0, 1.0, nodes).unwrap();
            let err = contour.matrix.sub(&direct.matrix).frob_norm();
            assert!(err < last, "no geometric decay: {err} after {last}");
            last = err;
        }
        assert!(last <= 1e-8, "final error {last}");
    }

    #[test]
    fn constant_rank_loop_on_rotating_family() {
        let fam = OperatorFamily::rotating_eigenbundle(vec![1.0, -1.0], 1).unwrap();
        let projectors = constant_rank_loop(&fam, 0.0, 2.0, 64).unwrap();
        assert_eq!(projectors.len(), 65);
        for p in &projectors {
            assert_eq!(p.rank, 1);
            assert!(p.gap_margin > 0.9);
        }
        let first = &projectors[0].matrix;
        let last = &projectors[64].matrix;
        assert!(first.sub(last).max_abs() < 1e-10);
    }

    #[test]
    fn constant_rank_loop_identical_for_constant_family() {
        let m = Mat::diag(&[1.0, -1.0]);
        let fam = OperatorFamily::explicit_samples(vec![m.clone(), m.clone(), m]).unwrap();
        let projectors = constant_rank_loop(&fam, 0.0, 2.0, 8).unwrap();
        for p in &projectors[1..] {
            assert!(p.matrix.sub(&projectors[0].matrix).max_abs() == 0.0);
        }
    }

    #[test]
    fn constant_rank_loop_detects_gap_collision() {
        // eigenvalue cos(2πt) crosses the endpoint 0.5 mid-loop
        let n = 32usize;
        let samples: Vec<Mat> = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                Mat::diag(&[math::cos(2.0 * math::PI * t), 5.0])
            })
            .collect();
        let fam = OperatorFamily::explicit_samples(samples).unwrap();
        let err = constant_rank_loop(&fam, 0.5, 6.0, n).unwrap_err();
        assert!(
            matches!(err, Error::GapViolated { .. }) || matches!(err, Error::RankChanged { .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn complementary_projectors_sum_to_identity() {
        let mut rng = SeededRng::new(23);
        let t = random_symmetric(6, &mut rng).scale(2.0);
        let sys = eigen_decompose(&t).unwrap();
        let split = 0.5 * (sys.values[2] + sys.values[3]);
        let bound = sys.values[5].abs().max(sys.values[0].abs()) + 1.0;
        let below = project_direct(&t, -bound, split).unwrap();
        let above = project_direct(&t, split, bound).unwrap();
        assert_eq!(below.rank + above.rank, 6);
        let sum = below.matrix.add(&above.matrix);
        assert!(sum.sub(&Mat::identity(6)).max_abs() < 1e-10);
    }
}
