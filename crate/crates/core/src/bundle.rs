//! Orientability signs of loops of spectral subspaces.
//!
//! A closed loop of rank-k orthogonal projectors carries a frame transported
//! by projecting the previous frame forward and re-orthonormalizing
//! symmetrically (Löwdin), which is continuous in the input and introduces
//! no spurious sign flips at near-degenerate steps. The matrix relating the
//! initial frame to the transported frame after one turn has a determinant
//! sign that classifies the loop's subspace bundle: +1 orientable (trivial),
//! −1 not. A −1 sign over a loop of operators certifies that no continuous
//! extension over a disk can keep both the spectral gap and the interval
//! eigencount — an eigenvalue-collision obstruction.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use crate::linalg::{det, lowdin, sym_eigen, sym_op_norm, Mat};
use crate::projection::{constant_rank_loop, IntervalProjector};

/// Closed loop of rank-k orthogonal projectors (`P_N = P_0`).
#[derive(Debug, Clone)]
pub struct SubspaceLoop {
    projectors: Vec<Mat>,
    rank: usize,
    step_gaps: Vec<f64>,
}

const CLOSURE_TOL: f64 = 1e-10;

impl SubspaceLoop {
    /// Validates closure (`P_N = P_0` entrywise to 1e−10), equal ranks read
    /// off traces, and operator-norm step gaps below 1.
    pub fn new(projectors: Vec<Mat>) -> Result<Self> {
        if projectors.len() < 3 {
            return Err(Error::Precondition("loop needs at least three samples"));
        }
        let closure = projectors
            .last()
            .unwrap()
            .sub(&projectors[0])
            .max_abs();
        if closure > CLOSURE_TOL {
            return Err(Error::LoopDoesNotClose { residual: closure });
        }
        let rank_of = |p: &Mat, sample: usize| -> Result<usize> {
            let tr = p.trace();
            let r = libm::round(tr) as usize;
            if (tr - r as f64).abs() > 1e-8 {
                return Err(Error::RankChanged { sample, expected: 0, got: usize::MAX });
            }
            Ok(r)
        };
        let rank = rank_of(&projectors[0], 0)?;
        for (i, p) in projectors.iter().enumerate() {
            let r = rank_of(p, i)?;
            if r != rank {
                return Err(Error::RankChanged { sample: i, expected: rank, got: r });
            }
        }
        let mut step_gaps = Vec::with_capacity(projectors.len() - 1);
        for (i, pair) in projectors.windows(2).enumerate() {
            let gap = sym_op_norm(&pair[1].sub(&pair[0]));
            if gap >= 1.0 {
                return Err(Error::LoopSamplingTooCoarse { step: i });
            }
            step_gaps.push(gap);
        }
        Ok(SubspaceLoop { projectors, rank, step_gaps })
    }

    pub fn from_interval_projectors(projectors: &[IntervalProjector]) -> Result<Self> {
        SubspaceLoop::new(projectors.iter().map(|p| p.matrix.clone()).collect())
    }

    pub fn projectors(&self) -> &[Mat] {
        &self.projectors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn step_gaps(&self) -> &[f64] {
        &self.step_gaps
    }

    pub fn max_step_gap(&self) -> f64 {
        self.step_gaps.iter().fold(0.0f64, |m, &g| m.max(g))
    }

    /// The same loop started at sample `offset` (for basepoint-independence
    /// checks).
    pub fn rebased(&self, offset: usize) -> SubspaceLoop {
        let n = self.projectors.len() - 1; // closing duplicate dropped
        let offset = offset % n;
        let mut rotated: Vec<Mat> = (0..n)
            .map(|i| self.projectors[(i + offset) % n].clone())
            .collect();
        rotated.push(rotated[0].clone());
        SubspaceLoop::new(rotated).expect("rebasing preserves loop validity")
    }

    /// The loop traversed twice.
    pub fn doubled(&self) -> SubspaceLoop {
        let n = self.projectors.len() - 1;
        let mut twice: Vec<Mat> = Vec::with_capacity(2 * n + 1);
        for i in 0..2 * n {
            twice.push(self.projectors[i % n].clone());
        }
        twice.push(twice[0].clone());
        SubspaceLoop::new(twice).expect("doubling preserves loop validity")
    }
}

/// Closure matrix of a propagated frame and the sign data justifying it.
#[derive(Debug, Clone)]
pub struct SignCertificate {
    /// `A = Ψ_0ᵀ Ψ_N`, the matrix relating the initial frame to its
    /// transport after one turn.
    pub closure_matrix: Mat,
    /// `sign(det A)`.
    pub det_sign: i8,
    /// `1 − max step gap`; positive slack keeps the propagation valid.
    pub min_step_gap_slack: f64,
    /// `‖AᵀA − I‖` (max entry); near zero for orthonormal input frames.
    pub orthonormality_residual: f64,
}

/// Deterministic orthonormal basis of the range of a rank-k projector:
/// eigenvectors of the top-k eigenvalues, each with its largest-magnitude
/// component made positive.
fn range_basis(p: &Mat, rank: usize) -> Mat {
    let n = p.rows();
    let (_, vectors) = sym_eigen(p);
    // eigenvalues ascend; range eigenvectors sit in the last `rank` columns
    let mut basis = Mat::zeros(n, rank);
    for j in 0..rank {
        let mut col = vectors.col(n - rank + j);
        let mut lead = 0usize;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[lead].abs() + 1e-14 {
                lead = i;
            }
        }
        if col[lead] < 0.0 {
            for v in col.iter_mut() {
                *v = -*v;
            }
        }
        basis.set_col(j, &col);
    }
    basis
}

/// Propagates the deterministic initial frame around the loop.
pub fn propagate_frame(lp: &SubspaceLoop) -> Result<SignCertificate> {
    let frame0 = range_basis(&lp.projectors[0], lp.rank);
    propagate_frame_from(lp, &frame0)
}

/// Propagates a caller-supplied orthonormal frame of `range(P_0)`: at each
/// step the frame is pushed through the next projector and Löwdin
/// re-orthonormalized; the closure matrix compares the start against the
/// transported end.
pub fn propagate_frame_from(lp: &SubspaceLoop, frame0: &Mat) -> Result<SignCertificate> {
    let k = lp.rank;
    assert_eq!(frame0.cols(), k, "frame rank mismatch");
    let ortho_in = frame0.transpose().matmul(frame0).sub(&Mat::identity(k)).max_abs();
    if ortho_in > 1e-8 {
        return Err(Error::NotOrthonormal { residual: ortho_in });
    }
    let mut frame = frame0.clone();
    for (i, p) in lp.projectors.iter().enumerate().skip(1) {
        let pushed = p.matmul(&frame);
        frame = lowdin(&pushed).map_err(|_| Error::LoopSamplingTooCoarse { step: i - 1 })?;
    }
    let closure_matrix = frame0.transpose().matmul(&frame);
    let d = det(&closure_matrix);
    if d.abs() < 0.5 {
        return Err(Error::UnreliableCertificate { det_abs: d.abs() });
    }
    let orthonormality_residual = closure_matrix
        .transpose()
        .matmul(&closure_matrix)
        .sub(&Mat::identity(k))
        .max_abs();
    Ok(SignCertificate {
        closure_matrix,
        det_sign: if d > 0.0 { 1 } else { -1 },
        min_step_gap_slack: 1.0 - lp.max_step_gap(),
        orthonormality_residual,
    })
}

/// Verdict of comparing the signs of two pointwise-close loops.
#[derive(Debug, Clone, PartialEq)]
pub enum StabilityVerdict {
    /// Hypothesis `sup ‖P_a − P_b‖₂ < 1` held and the signs agree.
    Agree { sign: i8, sup_distance: f64 },
    /// Distance reached 1 somewhere; no claim is made.
    HypothesisViolated { sup_distance: f64 },
}

/// Compares orientability signs of two loops sampled on the same grid.
///
/// The operator-norm distance between projectors is the computable
/// sufficient condition for sign stability; if it stays below 1 the signs
/// must agree (disagreement is reported as an error, meaning the
/// certificates cannot be trusted numerically).
pub fn sign_stability_check(
    loop_a: &SubspaceLoop,
    loop_b: &SubspaceLoop,
) -> Result<StabilityVerdict> {
    if loop_a.projectors.len() != loop_b.projectors.len() {
        return Err(Error::DimensionMismatch {
            expected: loop_a.projectors.len(),
            got: loop_b.projectors.len(),
        });
    }
    let mut sup = 0.0f64;
    for (pa, pb) in loop_a.projectors.iter().zip(&loop_b.projectors) {
        sup = sup.max(sym_op_norm(&pa.sub(pb)));
    }
    if sup >= 1.0 {
        return Ok(StabilityVerdict::HypothesisViolated { sup_distance: sup });
    }
    let sign_a = propagate_frame(loop_a)?.det_sign;
    let sign_b = propagate_frame(loop_b)?.det_sign;
    if sign_a != sign_b {
        return Err(Error::SignDisagreement { sign_a, sign_b });
    }
    Ok(StabilityVerdict::Agree { sign: sign_a, sup_distance: sup })
}

/// Sign of a frame transported by a loop of orthogonal matrices that closes
/// up to a global sign.
#[derive(Debug, Clone)]
pub struct TransportedSign {
    /// `sign(s^k)` where `H(1) = s·H(0)` and `k` is the subspace dimension.
    pub sign: i8,
    /// The loop parity `s`.
    pub loop_parity: i8,
    /// Max-entry distance of the closure matrix from `s · I`.
    pub closure_residual: f64,
}

/// Transports an orthonormal frame of `E0` along `t ↦ H(t)` and reads the
/// closure sign of the loop of subspaces `H(t)·E0`.
///
/// `h_loop` must close up to a global sign, `H(last) = s·H(first)` with
/// `s ∈ {±1}` (so the transported subspace closes up); `e0_frame` columns
/// must be orthonormal, and every sample must act isometrically on them
/// (checked to 1e−8), keeping the transported frame a frame. The closure
/// matrix of `Ψ(t) = H(t)·Ψ₀` is verified to equal `s·I` to 1e−6 and the
/// returned sign is `sign(s^k)`.
pub fn transported_sign(h_loop: &[Mat], e0_frame: &Mat) -> Result<TransportedSign> {
    if h_loop.len() < 2 {
        return Err(Error::Precondition("loop needs at least two samples"));
    }
    let k = e0_frame.cols();
    let ortho = e0_frame.transpose().matmul(e0_frame).sub(&Mat::identity(k)).max_abs();
    if ortho > 1e-8 {
        return Err(Error::NotOrthonormal { residual: ortho });
    }

    let first = &h_loop[0];
    let last = h_loop.last().unwrap();
    let plus = last.sub(first).max_abs();
    let minus = last.add(first).max_abs();
    let loop_parity: i8 = if plus <= 1e-10 {
        1
    } else if minus <= 1e-10 {
        -1
    } else {
        return Err(Error::LoopDoesNotClose { residual: plus.min(minus) });
    };

    // each sample must keep the transported frame orthonormal
    for (i, h) in h_loop.iter().enumerate() {
        let moved = h.matmul(e0_frame);
        let residual = moved.transpose().matmul(&moved).sub(&Mat::identity(k)).max_abs();
        if residual > 1e-8 {
            return Err(Error::InvarianceFailed { sample: i, residual });
        }
    }

    let start = first.matmul(e0_frame);
    let end = last.matmul(e0_frame);
    let closure = start.transpose().matmul(&end);
    let expected = Mat::identity(k).scale(loop_parity as f64);
    let closure_residual = closure.sub(&expected).max_abs();
    if closure_residual > 1e-6 {
        return Err(Error::LoopDoesNotClose { residual: closure_residual });
    }
    let sign = if loop_parity == -1 && k % 2 == 1 { -1 } else { 1 };
    Ok(TransportedSign { sign, loop_parity, closure_residual })
}

/// Orientability certificate for the interval eigenbundle over a loop of
/// operators.
#[derive(Debug, Clone)]
pub struct LassoCertificate {
    pub sign: i8,
    pub rank: usize,
    pub samples: usize,
    pub interval: (f64, f64),
    /// Min over samples of the projector gap margins.
    pub min_gap_margin: f64,
    pub max_step_gap: f64,
    pub closure_matrix: Mat,
}

impl LassoCertificate {
    pub fn obstructed(&self) -> bool {
        self.sign < 0
    }

    /// Human-readable meaning of the certificate.
    pub fn statement(&self) -> &'static str {
        if self.obstructed() {
            "the interval eigenbundle over this loop is non-orientable; any continuous \
             extension of the family over a disk bounded by this loop must, at some interior \
             parameter, either lose the spectral gap at the interval endpoints or change the \
             interval eigencount"
        } else {
            "no obstruction detected"
        }
    }
}

/// Runs the constant-rank projector loop for the interval and reads the
/// orientability sign of the propagated frame.
pub fn lasso_certificate(
    fam: &OperatorFamily,
    lo: f64,
    hi: f64,
    n_intervals: usize,
) -> Result<LassoCertificate> {
    let projectors = constant_rank_loop(fam, lo, hi, n_intervals)?;
    let min_gap_margin = projectors.iter().map(|p| p.gap_margin).fold(f64::INFINITY, f64::min);
    let lp = SubspaceLoop::from_interval_projectors(&projectors)?;
    let cert = propagate_frame(&lp)?;
    Ok(LassoCertificate {
        sign: cert.det_sign,
        rank: lp.rank(),
        samples: n_intervals,
        interval: (lo, hi),
        min_gap_margin,
        max_step_gap: lp.max_step_gap(),
        closure_matrix: cert.closure_matrix,
    })
}
