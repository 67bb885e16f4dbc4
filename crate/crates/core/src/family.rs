//! Parametrized families `t ∈ [0,1] → T(t)` of real symmetric matrices:
//! eigendecomposition, eigenvalue-branch tracking across the parameter,
//! growth-bound certificates, spectral flow, Min-Max and Rayleigh-distance
//! checks, and detection of identically-paired branches.
//!
//! Branches are matched between consecutive samples by eigenvector overlap,
//! not by sorted order, so genuine crossings are followed through instead of
//! being swapped into envelope curves.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, sym_eigen, sym_op_norm, vec_norm, Mat};
use crate::math::{self, asinh};
use crate::rng::SeededRng;
use crate::spectrum::{align, ordered_spectrum};

/// Absolute tolerance below which an endpoint eigenvalue counts as zero for
/// spectral flow.
pub const FLOW_ZERO_TOL: f64 = 1e-9;

/// Eigenvector-overlap threshold below which branch matching refuses to
/// guess.
pub const MATCH_THRESHOLD: f64 = 0.1;

/// How a family is generated.
#[derive(Debug, Clone)]
pub enum FamilyKind {
    /// Matrices on a uniform grid over `[0,1]`, piecewise-linearly
    /// interpolated in between.
    ExplicitSamples(Vec<Mat>),
    /// `T(t) = T0 + t (T1 − T0)`.
    LinearPencil { t0: Mat, t1: Mat },
    /// `R(θ(t)) · diag(d) · R(θ(t))ᵀ` with `θ(t) = half_turns · π · t`,
    /// rotating the plane of the first two coordinates. A closed loop for
    /// every integer number of half turns.
    RotatingEigenbundle { diag: Vec<f64>, half_turns: u32 },
    /// Closed trigonometric loop `A + cos(2πt) B + sin(2πt) C` with seeded
    /// random symmetric coefficients.
    SeededRandomPath { dim: usize, seed: u64 },
}

/// A family of real symmetric matrices over `t ∈ [0,1]`.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    dim: usize,
    kind: FamilyKind,
    is_loop: bool,
}

const SYM_RTOL: f64 = 1e-12;
const LOOP_TOL: f64 = 1e-12;

impl OperatorFamily {
    pub fn explicit_samples(samples: Vec<Mat>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Precondition("explicit family needs at least two samples"));
        }
        let dim = samples[0].rows();
        for s in &samples {
            if s.rows() != dim || s.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: s.rows() });
            }
            if !s.is_symmetric(SYM_RTOL) {
                return Err(Error::NotSymmetric { max_asymmetry: s.max_asymmetry() });
            }
        }
        Ok(Self::finish(dim, FamilyKind::ExplicitSamples(samples)))
    }

    pub fn linear_pencil(t0: Mat, t1: Mat) -> Result<Self> {
        let dim = t0.rows();
        if dim == 0 {
            return Err(Error::Precondition("zero dimension"));
        }
        if t1.rows() != dim || !t0.is_square() || !t1.is_square() {
            return Err(Error::DimensionMismatch { expected: dim, got: t1.rows() });
        }
        for m in [&t0, &t1] {
            if !m.is_symmetric(SYM_RTOL) {
                return Err(Error::NotSymmetric { max_asymmetry: m.max_asymmetry() });
            }
        }
        Ok(Self::finish(dim, FamilyKind::LinearPencil { t0, t1 }))
    }

    pub fn rotating_eigenbundle(diag: Vec<f64>, half_turns: u32) -> Result<Self> {
        if diag.len() < 2 {
            return Err(Error::Precondition("rotating eigenbundle needs dimension ≥ 2"));
        }
        let dim = diag.len();
        Ok(Self::finish(dim, FamilyKind::RotatingEigenbundle { diag, half_turns }))
    }

    pub fn seeded_random_path(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("zero dimension"));
        }
        Ok(Self::finish(dim, FamilyKind::SeededRandomPath { dim, seed }))
    }

    fn finish(dim: usize, kind: FamilyKind) -> Self {
        let mut fam = OperatorFamily { dim, kind, is_loop: false };
        let closure = fam.evaluate(1.0).sub(&fam.evaluate(0.0)).max_abs();
        fam.is_loop = closure <= LOOP_TOL * fam.evaluate(0.0).max_abs().max(1.0);
        fam
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// `evaluate(1) = evaluate(0)` entrywise within 1e−12 (relative).
    pub fn is_loop(&self) -> bool {
        self.is_loop
    }

    pub fn evaluate(&self, t: f64) -> Mat {
        debug_assert!((-1e-12..=1.0 + 1e-12).contains(&t), "parameter outside [0,1]");
        let t = t.clamp(0.0, 1.0);
        match &self.kind {
            FamilyKind::ExplicitSamples(samples) => {
                let segments = samples.len() - 1;
                let pos = t * segments as f64;
                let i = (math::floor(pos) as usize).min(segments - 1);
                let frac = pos - i as f64;
                samples[i].scale(1.0 - frac).add(&samples[i + 1].scale(frac))
            }
            FamilyKind::LinearPencil { t0, t1 } => {
                t0.add(&t1.sub(t0).scale(t))
            }
            FamilyKind::RotatingEigenbundle { diag, half_turns } => {
                let theta = *half_turns as f64 * math::PI * t;
                let r = plane_rotation(diag.len(), theta);
                r.matmul(&Mat::diag(diag)).matmul(&r.transpose())
            }
            FamilyKind::SeededRandomPath { dim, seed } => {
                let (a, b, c) = random_path_coefficients(*dim, *seed);
                let phase = 2.0 * math::PI * t;
                a.add(&b.scale(math::cos(phase))).add(&c.scale(math::sin(phase)))
            }
        }
    }
}

/// Rotation by `theta` in the plane of the first two coordinates.
fn plane_rotation(n: usize, theta: f64) -> Mat {
    let mut r = Mat::identity(n);
    let (c, s) = (math::cos(theta), math::sin(theta));
    r[(0, 0)] = c;
    r[(0, 1)] = -s;
    r[(1, 0)] = s;
    r[(1, 1)] = c;
    r
}

fn random_path_coefficients(dim: usize, seed: u64) -> (Mat, Mat, Mat) {
    let mut rng = SeededRng::new(seed);
    let mut sym = |scale: f64| {
        Mat::from_fn(dim, dim, |_, _| rng.uniform(-1.0, 1.0)).symmetrized().scale(scale)
    };
    let a = sym(1.0);
    let b = sym(0.5);
    let c = sym(0.5);
    (a, b, c)
}

/// Random symmetric matrix with entries uniform in `[-1, 1]`; test-fixture
/// helper shared with the synthetic-family builders.
pub fn random_symmetric(dim: usize, rng: &mut SeededRng) -> Mat {
    Mat::from_fn(dim, dim, |_, _| rng.uniform(-1.0, 1.0)).symmetrized()
}

/// Eigenvalues (ascending) with the matching orthogonal matrix of column
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Dense symmetric eigendecomposition; refuses matrices that are not
/// symmetric within 1e−12 relative tolerance.
pub fn eigen_decompose(t: &Mat) -> Result<EigenSystem> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch { expected: t.rows(), got: t.cols() });
    }
    if !t.is_symmetric(SYM_RTOL) {
        return Err(Error::NotSymmetric { max_asymmetry: t.max_asymmetry() });
    }
    let (values, vectors) = sym_eigen(t);
    Ok(EigenSystem { values, vectors })
}

/// Eigendecompositions at `t_i = i / n_intervals`, `i = 0..=n_intervals`.
///
/// Samples are independent; callers running with threads may compute them
/// concurrently and use the `*_from` entry points below.
pub fn sample_eigensystems(fam: &OperatorFamily, n_intervals: usize) -> Result<Vec<EigenSystem>> {
    assert!(n_intervals >= 1);
    (0..=n_intervals)
        .map(|i| eigen_decompose(&fam.evaluate(i as f64 / n_intervals as f64)))
        .collect()
}

/// Constants controlling the eigenvalue growth bound of a linear pencil.
///
/// `c = beta / alpha` drives `|λ(t) − λ(t₀)| ≤ (1 + |λ(t₀)|)(e^{c|t−t₀|} − 1)`;
/// `c0, c1, c2, r_cut` are the universal constants entering the arsinh-form
/// radius `delta_for_epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct KatoConstants {
    /// Lower bound on `(‖u‖ + ‖T(t)u‖) / ‖u‖_Z` over the pencil.
    pub alpha: f64,
    /// Operator 2-norm of the pencil direction `T1 − T0`.
    pub beta: f64,
    /// `beta / alpha` (0 for a constant family).
    pub c: f64,
    /// Any value with `|η| ≥ r_cut ⇒ |η|/(1+|η|) > 1/2`; fixed to 2.
    pub r_cut: f64,
    /// `sup_t (1+|t|)/√(1+t²) = √2`.
    pub c0: f64,
    /// Universal constant 1/4.
    pub c1: f64,
    /// `min(1/(r_cut+1), 1/(2 c0))`.
    pub c2: f64,
}

const ALPHA_GRID: usize = 101;

/// Computes the growth constants of a linear pencil.
///
/// `alpha` is evaluated on a fixed 101-point `t`-grid: at each grid point the
/// ratio `(‖u‖ + ‖T(t)u‖)/(‖u‖ + ‖T0 u‖)` is minimized over the unit sphere
/// by projected gradient descent, seeded from the quadratic-form relaxation
/// `(I + T(t)²) v = μ (I + T0²) v` and warm-started along the grid. The grid
/// contains `t = 0`, so `alpha ≤ 1` always.
pub fn kato_constants(fam: &OperatorFamily) -> Result<KatoConstants> {
    let FamilyKind::LinearPencil { t0, t1 } = fam.kind() else {
        return Err(Error::WrongFamilyKind { expected: "linear-pencil" });
    };
    if fam.dim() == 0 {
        return Err(Error::Precondition("zero dimension"));
    }
    let direction = t1.sub(t0);
    let beta = sym_op_norm(&direction);

    let mut rng = SeededRng::new(0x5eed_a1fa);
    let mut alpha = f64::INFINITY;
    let mut warm: Option<Vec<f64>> = None;
    for i in 0..ALPHA_GRID {
        let t = i as f64 / (ALPHA_GRID - 1) as f64;
        let d = t0.add(&direction.scale(t));
        let (value, minimizer) = min_sum_norm_ratio(&d, t0, warm.as_deref(), &mut rng);
        alpha = alpha.min(value);
        warm = Some(minimizer);
    }

    let r_cut: f64 = 2.0;
    let c0 = math::sqrt(2.0);
    let c1 = 0.25;
    let c2 = f64::min(1.0 / (r_cut + 1.0), 1.0 / (2.0 * c0));
    let c = if beta == 0.0 { 0.0 } else { beta / alpha };
    Ok(KatoConstants { alpha, beta, c, r_cut, c0, c1, c2 })
}

fn sum_norm_ratio(d: &Mat, t0: &Mat, u: &[f64]) -> f64 {
    let nu = vec_norm(u);
    let ndu = vec_norm(&d.mul_vec(u));
    let ntu = vec_norm(&t0.mul_vec(u));
    (nu + ndu) / (nu + ntu)
}

fn normalize(u: &mut [f64]) {
    let n = vec_norm(u);
    if n > 0.0 {
        for x in u.iter_mut() {
            *x /= n;
        }
    }
}

/// Minimizes `(‖u‖ + ‖D u‖)/(‖u‖ + ‖T0 u‖)` over the unit sphere; returns
/// the minimum and its minimizer.
fn min_sum_norm_ratio(
    d: &Mat,
    t0: &Mat,
    warm: Option<&[f64]>,
    rng: &mut SeededRng,
) -> (f64, Vec<f64>) {
    let n = d.rows();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(w) = warm {
        starts.push(w.to_vec());
    }
    // quadratic relaxation start: smallest eigenpair of (I+D²) v = μ (I+T0²) v
    let eye = Mat::identity(n);
    let g = t0.matmul(t0).add(&eye);
    let (gvals, gq) = sym_eigen(&g);
    let g_inv_half = Mat::from_fn(n, n, |i, j| {
        (0..n).map(|k| gq[(i, k)] * gq[(j, k)] / math::sqrt(gvals[k])).sum()
    });
    let m = g_inv_half.matmul(&d.matmul(d).add(&eye)).matmul(&g_inv_half).symmetrized();
    let (_, mq) = sym_eigen(&m);
    let mut quad = g_inv_half.mul_vec(&mq.col(0));
    normalize(&mut quad);
    starts.push(quad);
    for _ in 0..2 {
        let mut u: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        normalize(&mut u);
        starts.push(u);
    }

    let mut best_val = f64::INFINITY;
    let mut best_vec = vec![0.0; n];
    for mut u in starts {
        normalize(&mut u);
        let mut fu = sum_norm_ratio(d, t0, &u);
        for _ in 0..250 {
            let a = vec_norm(&u);
            let du = d.mul_vec(&u);
            let tu = t0.mul_vec(&u);
            let b = vec_norm(&du);
            let p = vec_norm(&tu);
            let num = a + b;
            let den = a + p;
            let mut grad = vec![0.0; n];
            let ddu = d.mul_vec(&du);
            let ttu = t0.mul_vec(&tu);
            for i in 0..n {
                let gnum = u[i] / a + if b > 1e-150 { ddu[i] / b } else { 0.0 };
                let gden = u[i] / a + if p > 1e-150 { ttu[i] / p } else { 0.0 };
                grad[i] = (gnum * den - num * gden) / (den * den);
            }
            let radial = dot(&grad, &u);
            for i in 0..n {
                grad[i] -= radial * u[i];
            }
            let gn = vec_norm(&grad);
            if gn < 1e-13 {
                break;
            }
            let mut step = 0.5 / gn.max(1.0);
            let mut improved = false;
            for _ in 0..40 {
                let mut v: Vec<f64> = u.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
                normalize(&mut v);
                let fv = sum_norm_ratio(d, t0, &v);
                if fv < fu - 1e-16 {
                    u = v;
                    fu = fv;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if fu < best_val {
            best_val = fu;
            best_vec = u;
        }
    }
    (best_val, best_vec)
}

/// Radius `δ` such that every eigenvalue branch moves less than `eps` in the
/// arsinh metric over `|t − t₀| ≤ δ`: `δ = c⁻¹ ln(min(c1, eps·c2) + 1)`.
///
/// A constant family (`c = 0`) satisfies the bound for every `t`, returned
/// as `+∞`.
pub fn delta_for_epsilon(k: &KatoConstants, eps: f64) -> f64 {
    assert!(eps > 0.0, "eps must be positive");
    if k.c == 0.0 {
        return f64::INFINITY;
    }
    math::ln(k.c1.min(eps * k.c2) + 1.0) / k.c
}

/// Eigenvalue branches over a sample grid; `branches[j][i]` is branch `j` at
/// `times[i]`.
#[derive(Debug, Clone)]
pub struct BranchSet {
    pub times: Vec<f64>,
    pub branches: Vec<Vec<f64>>,
}

/// Continues each eigenvalue branch across the grid by maximal
/// eigenvector-overlap assignment between consecutive samples.
pub fn track_branches(fam: &OperatorFamily, n_intervals: usize) -> Result<BranchSet> {
    assert!(n_intervals >= 2, "need at least two intervals");
    let systems = sample_eigensystems(fam, n_intervals)?;
    let times = (0..=n_intervals).map(|i| i as f64 / n_intervals as f64).collect();
    track_branches_from(&systems, times)
}

/// Branch tracking from precomputed per-sample eigendecompositions.
pub fn track_branches_from(systems: &[EigenSystem], times: Vec<f64>) -> Result<BranchSet> {
    assert_eq!(systems.len(), times.len());
    assert!(systems.len() >= 2);
    let n = systems[0].values.len();
    let mut branches: Vec<Vec<f64>> = (0..n).map(|j| vec![systems[0].values[j]]) .collect();
    // branch b currently sits at eigen index position[b] of the latest sample
    let mut position: Vec<usize> = (0..n).collect();
    for step in 0..systems.len() - 1 {
        let perm = overlap_assignment(&systems[step], &systems[step + 1], step)?;
        for b in 0..n {
            position[b] = perm[position[b]];
            branches[b].push(systems[step + 1].values[position[b]]);
        }
    }
    Ok(BranchSet { times, branches })
}

/// Greedy maximal-overlap assignment `perm[i] = j` from sample `k` to `k+1`;
/// ties broken by eigenvalue proximity, then by index.
fn overlap_assignment(prev: &EigenSystem, next: &EigenSystem, step: usize) -> Result<Vec<usize>> {
    let n = prev.values.len();
    let mut overlap = Mat::zeros(n, n);
    for i in 0..n {
        let vi = prev.vectors.col(i);
        for j in 0..n {
            overlap[(i, j)] = dot(&vi, &next.vectors.col(j)).abs();
        }
    }
    let mut row_done = vec![false; n];
    let mut col_done = vec![false; n];
    let mut perm = vec![0usize; n];
    for _ in 0..n {
        let mut best: Option<(usize, usize, f64, f64)> = None;
        for i in 0..n {
            if row_done[i] {
                continue;
            }
            for j in 0..n {
                if col_done[j] {
                    continue;
                }
                let o = overlap[(i, j)];
                let prox = (prev.values[i] - next.values[j]).abs();
                let better = match best {
                    None => true,
                    Some((_, _, bo, bp)) => o > bo + 1e-12 || (o > bo - 1e-12 && prox < bp),
                };
                if better {
                    best = Some((i, j, o, prox));
                }
            }
        }
        let (i, j, o, _) = best.expect("unassigned pair must exist");
        if o < MATCH_THRESHOLD {
            return Err(Error::GridTooCoarse { step });
        }
        perm[i] = j;
        row_done[i] = true;
        col_done[j] = true;
    }
    Ok(perm)
}

/// Result of checking the exponential growth bound along tracked branches.
#[derive(Debug, Clone)]
pub struct GrowthReport {
    /// Max over branches and sample pairs of `|λ(t)−λ(t₀)|` divided by the
    /// bound `(1+|λ(t₀)|)(e^{c|t−t₀|}−1)`; coincident samples count as 0.
    pub max_ratio: f64,
    /// Pairs exceeding ratio `1 + 1e−9`.
    pub violations: usize,
    pub pairs_checked: usize,
}

/// Checks every branch and ordered sample pair against the growth bound;
/// violations are reported, not thrown.
pub fn verify_growth_bound(branches: &BranchSet, k: &KatoConstants) -> GrowthReport {
    let mut max_ratio = 0.0f64;
    let mut violations = 0usize;
    let mut pairs = 0usize;
    for branch in &branches.branches {
        for i0 in 0..branches.times.len() {
            let lambda0 = branch[i0];
            for i in 0..branches.times.len() {
                if i == i0 {
                    continue;
                }
                let dt = (branches.times[i] - branches.times[i0]).abs();
                let lhs = (branch[i] - lambda0).abs();
                let rhs = (1.0 + lambda0.abs()) * (math::exp(k.c * dt) - 1.0);
                pairs += 1;
                let ratio = if rhs == 0.0 {
                    if lhs == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    lhs / rhs
                };
                if ratio > 1.0 + 1e-9 {
                    violations += 1;
                }
                max_ratio = max_ratio.max(ratio);
            }
        }
    }
    GrowthReport { max_ratio, violations, pairs_checked: pairs }
}

/// Result of checking the arsinh form of the growth bound.
#[derive(Debug, Clone)]
pub struct ArsinhGrowthReport {
    pub epsilon: f64,
    pub delta: f64,
    /// Max arsinh increment over pairs with `|t − t₀| ≤ delta`.
    pub max_increment: f64,
    pub ok: bool,
}

/// Verifies that every branch moves less than `eps` in the arsinh metric
/// across any two samples within `delta_for_epsilon(k, eps)` of each other.
pub fn verify_arsinh_bound(branches: &BranchSet, k: &KatoConstants, eps: f64) -> ArsinhGrowthReport {
    let delta = delta_for_epsilon(k, eps);
    let mut max_increment = 0.0f64;
    for branch in &branches.branches {
        for i0 in 0..branches.times.len() {
            for i in i0 + 1..branches.times.len() {
                if (branches.times[i] - branches.times[i0]).abs() <= delta {
                    let inc = (asinh(branch[i]) - asinh(branch[i0])).abs();
                    max_increment = max_increment.max(inc);
                }
            }
        }
    }
    ArsinhGrowthReport { epsilon: eps, delta, max_increment, ok: max_increment < eps }
}

/// How to compute spectral flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMethod {
    /// Sum of per-step window-alignment shifts.
    ShiftAlign,
    /// Signed count of branch zero-crossings (+1 from below, −1 from above).
    ZeroCrossing,
}

/// Net number of eigenvalues crossing zero from below along the family.
///
/// Requires both endpoint spectra bounded away from zero and a grid fine
/// enough that consecutive spectra align unambiguously.
pub fn spectral_flow(fam: &OperatorFamily, n_intervals: usize, method: FlowMethod) -> Result<i64> {
    let systems = sample_eigensystems(fam, n_intervals)?;
    spectral_flow_from(&systems, method)
}

/// Spectral flow from precomputed per-sample eigendecompositions.
pub fn spectral_flow_from(systems: &[EigenSystem], method: FlowMethod) -> Result<i64> {
    assert!(systems.len() >= 2);
    for endpoint in [systems.first().unwrap(), systems.last().unwrap()] {
        for &v in &endpoint.values {
            if v.abs() < FLOW_ZERO_TOL {
                return Err(Error::ZeroEndpointEigenvalue { eigenvalue: v });
            }
        }
    }
    match method {
        FlowMethod::ShiftAlign => {
            let n = systems[0].values.len();
            let windows: Vec<_> = systems
                .iter()
                .map(|s| ordered_spectrum(&s.values))
                .collect::<Result<Vec<_>>>()?;
            let mut flow = 0i64;
            for (step, pair) in windows.windows(2).enumerate() {
                let r = align(&pair[0], &pair[1], n as u32, 1)?;
                let gap = anchor_arsinh_gap(&pair[0]).min(anchor_arsinh_gap(&pair[1]));
                if r.distance >= 0.5 * gap {
                    return Err(Error::GridTooCoarse { step });
                }
                flow += r.shift;
            }
            Ok(flow)
        }
        FlowMethod::ZeroCrossing => {
            let times = (0..systems.len())
                .map(|i| i as f64 / (systems.len() - 1) as f64)
                .collect();
            let branches = track_branches_from(systems, times)?;
            let mut flow = 0i64;
            for branch in &branches.branches {
                let mut prev = branch[0] > 0.0;
                for &v in &branch[1..] {
                    if v == 0.0 {
                        continue; // sign resolved by the next nonzero sample
                    }
                    let now = v > 0.0;
                    if now != prev {
                        flow += if now { 1 } else { -1 };
                        prev = now;
                    }
                }
            }
            Ok(flow)
        }
    }
}

/// Arsinh spacing isolating the anchor cluster of an ordered window: the
/// minimal distance from the multiplicity cluster at index 0 (or at the top
/// index for all-negative windows) to its neighboring distinct values.
///
/// Per-step alignment shifts are unambiguous relative to this gap — eigen-
/// value collisions far from the anchor translate nothing, so they do not
/// tighten it.
fn anchor_arsinh_gap(window: &crate::spectrum::SpectrumWindow) -> f64 {
    let values = window.values();
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let cluster_tol = 1e-12 * scale;
    let anchor = window.value_at(0).unwrap_or_else(|| *values.last().unwrap());
    let mut below = f64::INFINITY;
    let mut above = f64::INFINITY;
    for &v in values {
        let d = v - anchor;
        if d < -cluster_tol {
            below = below.min(asinh(anchor) - asinh(v));
        } else if d > cluster_tol {
            above = above.min(asinh(v) - asinh(anchor));
        }
    }
    below.min(above)
}

/// Outcome of the Min-Max verification for one matrix and index.
#[derive(Debug, Clone)]
pub struct MinMaxReport {
    pub lambda_k: f64,
    /// Max Rayleigh quotient over the span of the first k eigenvectors.
    pub eigen_subspace_max: f64,
    /// Smallest over the random trials of the per-subspace max quotient.
    pub min_trial_max: f64,
    pub trials: usize,
    /// Trials whose max quotient fell below `λ_k − 1e−9`.
    pub violations: usize,
}

impl MinMaxReport {
    pub fn ok(&self) -> bool {
        (self.eigen_subspace_max - self.lambda_k).abs() <= 1e-9 && self.violations == 0
    }
}

/// Verifies the variational characterization of `λ_k`: the eigen-subspace
/// attains it, and no random `k`-dimensional subspace beats it.
pub fn min_max_check(t: &Mat, k: usize, trials: usize, seed: u64) -> Result<MinMaxReport> {
    let eig = eigen_decompose(t)?;
    let n = eig.values.len();
    if k < 1 || k > n {
        return Err(Error::Precondition("index k outside 1..=n"));
    }
    let lambda_k = eig.values[k - 1];

    let basis = Mat::from_fn(n, k, |i, j| eig.vectors[(i, j)]);
    let eigen_subspace_max = max_rayleigh_on_span(t, &basis);

    let mut rng = SeededRng::new(seed);
    let mut min_trial_max = f64::INFINITY;
    let mut violations = 0usize;
    for _ in 0..trials {
        let raw = Mat::from_fn(n, k, |_, _| rng.uniform(-1.0, 1.0));
        let Ok(w) = linalg::orthonormal_columns(&raw) else {
            continue; // rank-deficient draw; skip rather than bias
        };
        let m = max_rayleigh_on_span(t, &w);
        min_trial_max = min_trial_max.min(m);
        if m < lambda_k - 1e-9 {
            violations += 1;
        }
    }
    Ok(MinMaxReport { lambda_k, eigen_subspace_max, min_trial_max, trials, violations })
}

/// Max Rayleigh quotient of `t` over the span of the orthonormal columns of
/// `w`: the top eigenvalue of `wᵀ t w`.
fn max_rayleigh_on_span(t: &Mat, w: &Mat) -> f64 {
    let restricted = w.transpose().matmul(&t.matmul(w)).symmetrized();
    let (vals, _) = sym_eigen(&restricted);
    *vals.last().unwrap()
}

/// Outcome of the Rayleigh distance bound check for one vector.
#[derive(Debug, Clone)]
pub struct RayleighDistanceReport {
    pub rayleigh: f64,
    /// `max(0, rayleigh − Λ)`, the slack the bound is tested with.
    pub epsilon: f64,
    pub distance_sq: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Checks `d(V, x)² ≤ (Λ + ε)/λ_{k+1}` where `V` spans the eigenvectors
/// below `Λ` and `ε = max(0, ⟨Tx,x⟩ − Λ)`.
///
/// Preconditions (distinct non-negative eigenvalue levels with `Λ` strictly
/// inside a spectral gap below the top level) are reported as errors.
pub fn rayleigh_distance_check(t: &Mat, cap: f64, x: &[f64]) -> Result<RayleighDistanceReport> {
    let eig = eigen_decompose(t)?;
    let n = eig.values.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if eig.values[0] < -1e-9 * scale {
        return Err(Error::Precondition("spectrum must be non-negative"));
    }
    let gap_tol = 1e-9 * scale;
    if eig.values.iter().any(|&v| (v - cap).abs() <= gap_tol) {
        return Err(Error::Precondition("cap must avoid the spectrum"));
    }
    let next_level = eig
        .values
        .iter()
        .copied()
        .find(|&v| v > cap)
        .ok_or(Error::Precondition("cap must lie below the top eigenvalue"))?;
    if !eig.values.iter().any(|&v| v < cap) {
        return Err(Error::Precondition("cap must lie above the bottom eigenvalue"));
    }

    let norm = vec_norm(x);
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition("x must be a unit vector"));
    }

    let tx = t.mul_vec(x);
    let rayleigh = dot(&tx, x) / (norm * norm);
    let epsilon = (rayleigh - cap).max(0.0);

    // distance to V = span of eigenvectors below cap, via orthogonal projection
    let mut proj = vec![0.0; n];
    for j in 0..n {
        if eig.values[j] < cap {
            let vj = eig.vectors.col(j);
            let c = dot(&vj, x);
            for i in 0..n {
                proj[i] += c * vj[i];
            }
        }
    }
    let distance_sq: f64 = x.iter().zip(&proj).map(|(a, b)| (a - b) * (a - b)).sum();
    let bound = (cap + epsilon) / next_level + 1e-9;
    Ok(RayleighDistanceReport { rayleigh, epsilon, distance_sq, bound, ok: distance_sq <= bound })
}

/// Result of searching branch 1 for an identically-equal partner branch.
#[derive(Debug, Clone, PartialEq)]
pub enum PairingReport {
    /// Partner branch index (into the tracked branch list) whose values agree
    /// with branch 0 everywhere within tolerance.
    Paired { partner: usize, sup_deviation: f64 },
    /// The all-multiplicities-even precondition failed first at this `t`.
    EvennessFailed { t: f64 },
    /// Evenness held on the grid but no branch stayed within tolerance;
    /// reports the closest candidate.
    NoPartner { closest: usize, sup_deviation: f64 },
}

/// Under the everywhere-even-multiplicity hypothesis, branch 0 must be
/// identically equal to some other branch; finds it or reports the failure.
pub fn detect_paired_branches(
    fam: &OperatorFamily,
    n_intervals: usize,
    tol: f64,
) -> Result<PairingReport> {
    let branches = track_branches(fam, n_intervals)?;
    let n = branches.branches.len();
    // evenness of every multiplicity cluster at every sample
    for (i, &t) in branches.times.iter().enumerate() {
        let mut values: Vec<f64> = branches.branches.iter().map(|b| b[i]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut run = 1usize;
        for j in 1..=values.len() {
            if j < values.len() && (values[j] - values[j - 1]).abs() <= tol {
                run += 1;
            } else {
                if run % 2 == 1 {
                    return Ok(PairingReport::EvennessFailed { t });
                }
                run = 1;
            }
        }
    }
    let mut closest = 1usize;
    let mut closest_dev = f64::INFINITY;
    for m in 1..n {
        let dev = branches.branches[0]
            .iter()
            .zip(&branches.branches[m])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if dev <= tol {
            return Ok(PairingReport::Paired { partner: m, sup_deviation: dev });
        }
        if dev < closest_dev {
            closest_dev = dev;
            closest = m;
        }
    }
    Ok(PairingReport::NoPartner { closest, sup_deviation: closest_dev })
}

#[cfg(test)]
mod tests {
    use super::*;

    // ---- independent eigenvalue oracle: inertia bisection -------------

    /// Number of eigenvalues of `t` strictly below `x`, by the inertia of
    /// `t − xI` under symmetric Gaussian elimination (no pivoting; shifts
    /// that hit a tiny pivot are nudged).
    fn count_below(t: &Mat, x: f64) -> usize {
        let n = t.rows();
        let mut shift = x;
        'retry: loop {
            let mut m = Mat::from_fn(n, n, |i, j| t[(i, j)] - if i == j { shift } else { 0.0 });
            let mut negatives = 0usize;
            for k in 0..n {
                let pivot = m[(k, k)];
                if pivot.abs() < 1e-11 {
                    shift += 3.7e-10; // degenerate elimination; nudge the shift
                    continue 'retry;
                }
                if pivot < 0.0 {
                    negatives += 1;
                }
                for i in k + 1..n {
                    let f = m[(i, k)] / pivot;
                    for j in k..n {
                        let mkj = m[(k, j)];
                        m[(i, j)] -= f * mkj;
                    }
                }
            }
            return negatives;
        }
    }

    fn bisection_eigenvalues(t: &Mat) -> Vec<f64> {
        let n = t.rows();
        // Gershgorin bounds
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| t[(i, j)].abs()).sum();
            lo = lo.min(t[(i, i)] - radius);
            hi = hi.max(t[(i, i)] + radius);
        }
        (0..n)
            .map(|k| {
                let (mut a, mut b) = (lo - 1.0, hi + 1.0);
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    if count_below(t, mid) <= k {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }

    #[test]
    fn eigen_decompose_diagonal_permutation() {
        let sys = eigen_decompose(&Mat::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(sys.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigen_decompose_identity() {
        let sys = eigen_decompose(&Mat::identity(4)).unwrap();
        assert_eq!(sys.values, vec![1.0; 4]);
    }

    #[test]
    fn eigen_decompose_rejects_asymmetric() {
        let mut m = Mat::identity(3);
        m[(0, 1)] = 0.5;
        assert!(matches!(eigen_decompose(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eigen_decompose_matches_bisection_oracle() {
        let mut rng = SeededRng::new(2024);
        let t = random_symmetric(8, &mut rng);
        let sys = eigen_decompose(&t).unwrap();
        let oracle = bisection_eigenvalues(&t);
        for (a, b) in sys.values.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8, "jacobi {a} vs bisection {b}");
        }
    }

    #[test]
    fn kato_constant_family_has_zero_c() {
        let t0 = Mat::diag(&[1.0, -2.0, 5.0]);
        let fam = OperatorFamily::linear_pencil(t0.clone(), t0).unwrap();
        let k = kato_constants(&fam).unwrap();
        assert_eq!(k.beta, 0.0);
        assert_eq!(k.c, 0.0);
        assert_eq!(delta_for_epsilon(&k, 0.5), f64::INFINITY);
    }

    #[test]
    fn kato_c0_matches_grid_maximum() {
        // independent evaluation of sup (1+|t|)/sqrt(1+t²)
        let mut sup = 0.0f64;
        for i in 0..200_001 {
            let t = -100.0 + i as f64 * 1e-3;
            sup = sup.max((1.0 + t.abs()) / math::sqrt(1.0 + t * t));
        }
        let fam = OperatorFamily::linear_pencil(Mat::identity(2), Mat::identity(2)).unwrap();
        let k = kato_constants(&fam).unwrap();
        assert!((k.c0 - sup).abs() < 1e-8);
        assert!((k.c0 - math::sqrt(2.0)).abs() < 1e-15);
        assert!((k.c2 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(k.c1, 0.25);
    }

    #[test]
    fn kato_alpha_above_half_for_small_pencils() {
        let mut rng = SeededRng::new(11);
        for seed in 0..5 {
            let t0 = random_symmetric(6, &mut rng).scale(1.0 + seed as f64 * 0.3);
            let mut dt = random_symmetric(6, &mut rng);
            dt = dt.scale(0.4 / sym_op_norm(&dt));
            let fam = OperatorFamily::linear_pencil(t0.clone(), t0.add(&dt)).unwrap();
            let k = kato_constants(&fam).unwrap();
            assert!(k.beta < 0.5);
            assert!(k.alpha >= 0.5, "alpha {} below 1/2", k.alpha);
            assert!(k.alpha <= 1.0 + 1e-12, "grid contains t=0 so alpha ≤ 1");
        }
    }

    #[test]
    fn delta_formula_frozen_value() {
        let k = KatoConstants {
            alpha: 1.0,
            beta: math::ln(2.0),
            c: math::ln(2.0),
            r_cut: 2.0,
            c0: math::sqrt(2.0),
            c1: 0.25,
            c2: 1.0 / 3.0,
        };
        // eps large enough that min(C1, eps C2) = C1 = 1/4
        let delta = delta_for_epsilon(&k, 10.0);
        assert!((delta - 0.321_928_094_887_362_35).abs() < 1e-15);
        // monotone toward 0 as eps shrinks
        let mut last = delta;
        for eps in [0.7, 0.5, 0.1, 1e-3, 1e-6] {
            let d = delta_for_epsilon(&k, eps);
            assert!(d <= last + 1e-15);
            assert!(d > 0.0);
            last = d;
        }
    }

    #[test]
    fn branches_constant_family() {
        let t0 = Mat::diag(&[1.0, 2.0]);
        let fam = OperatorFamily::linear_pencil(t0.clone(), t0).unwrap();
        let b = track_branches(&fam, 10).unwrap();
        for branch in &b.branches {
            for w in branch.windows(2) {
                assert_eq!(w[0], w[1]);
            }
        }
    }

    #[test]
    fn branches_follow_crossing_not_envelope() {
        // diag(t, 1−t): eigenvectors are the fixed coordinate axes, so the
        // tracked branches are the straight lines through the crossing
        let fam =
            OperatorFamily::linear_pencil(Mat::diag(&[0.0, 1.0]), Mat::diag(&[1.0, 0.0])).unwrap();
        let b = track_branches(&fam, 100).unwrap();
        for (i, &t) in b.times.iter().enumerate() {
            let values = [b.branches[0][i], b.branches[1][i]];
            let mut expected = [t, 1.0 - t];
            // branch order at t=0 is ascending: (0, 1) ↦ branch0 = t line
            expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut got = values;
            got.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (g, e) in got.iter().zip(&expected) {
                assert!((g - e).abs() < 1e-12);
            }
        }
        // the line branches are linear, not the min/max envelopes
        let mid = 50; // t = 0.5 crossing
        let quarter = 25;
        let b0 = &b.branches[0];
        assert!((b0[mid] - 0.5).abs() < 1e-12);
        // a line keeps its slope through the crossing
        let slope_before = b0[quarter + 1] - b0[quarter];
        let slope_after = b0[mid + quarter + 1] - b0[mid + quarter];
        assert!((slope_before - slope_after).abs() < 1e-12, "branch kinked at the crossing");
    }

    #[test]
    fn branch_multiset_matches_spectrum() {
        let fam = OperatorFamily::seeded_random_path(5, 99).unwrap();
        let n = 40;
        let b = track_branches(&fam, n).unwrap();
        for i in 0..=n {
            let sys = eigen_decompose(&fam.evaluate(i as f64 / n as f64)).unwrap();
            let mut from_branches: Vec<f64> = b.branches.iter().map(|br| br[i]).collect();
            from_branches.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (x, y) in from_branches.iter().zip(&sys.values) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn growth_bound_holds_on_seeded_pencil() {
        let mut rng = SeededRng::new(31);
        let t0 = random_symmetric(6, &mut rng);
        let mut dt = random_symmetric(6, &mut rng);
        dt = dt.scale(0.45 / sym_op_norm(&dt));
        let fam = OperatorFamily::linear_pencil(t0.clone(), t0.add(&dt)).unwrap();
        let k = kato_constants(&fam).unwrap();
        let branches = track_branches(&fam, 60).unwrap();
        let report = verify_growth_bound(&branches, &k);
        assert!(report.max_ratio <= 1.0 + 1e-9, "ratio {}", report.max_ratio);
        assert_eq!(report.violations, 0);

        let arsinh = verify_arsinh_bound(&branches, &k, 0.25);
        assert!(arsinh.ok, "increment {} ≥ eps", arsinh.max_increment);
    }

    #[test]
    fn growth_report_constant_family_is_zero() {
        let t0 = Mat::diag(&[2.0, -3.0]);
        let fam = OperatorFamily::linear_pencil(t0.clone(), t0).unwrap();
        let k = kato_constants(&fam).unwrap();
        let branches = track_branches(&fam, 10).unwrap();
        let report = verify_growth_bound(&branches, &k);
        assert_eq!(report.max_ratio, 0.0);
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn flow_constant_family_is_zero() {
        let t0 = Mat::diag(&[1.0, -2.0]);
        let fam = OperatorFamily::linear_pencil(t0.clone(), t0).unwrap();
        assert_eq!(spectral_flow(&fam, 10, FlowMethod::ShiftAlign).unwrap(), 0);
        assert_eq!(spectral_flow(&fam, 10, FlowMethod::ZeroCrossing).unwrap(), 0);
    }

    #[test]
    fn flow_single_upward_crossing() {
        let fam = OperatorFamily::linear_pencil(
            Mat::diag(&[-1.0, -5.0, 5.0, -10.0, 10.0]),
            Mat::diag(&[1.0, -5.0, 5.0, -10.0, 10.0]),
        )
        .unwrap();
        assert_eq!(spectral_flow(&fam, 100, FlowMethod::ShiftAlign).unwrap(), 1);
        assert_eq!(spectral_flow(&fam, 100, FlowMethod::ZeroCrossing).unwrap(), 1);
    }

    #[test]
    fn flow_single_downward_crossing() {
        let fam = OperatorFamily::linear_pencil(
            Mat::diag(&[1.0, -5.0, 5.0]),
            Mat::diag(&[-1.0, -5.0, 5.0]),
        )
        .unwrap();
        assert_eq!(spectral_flow(&fam, 100, FlowMethod::ShiftAlign).unwrap(), -1);
        assert_eq!(spectral_flow(&fam, 100, FlowMethod::ZeroCrossing).unwrap(), -1);
    }

    #[test]
    fn flow_rejects_zero_endpoint() {
        let fam = OperatorFamily::linear_pencil(
            Mat::diag(&[0.0, 3.0]),
            Mat::diag(&[1.0, 3.0]),
        )
        .unwrap();
        assert!(matches!(
            spectral_flow(&fam, 10, FlowMethod::ShiftAlign),
            Err(Error::ZeroEndpointEigenvalue { .. })
        ));
    }

    #[test]
    fn flow_stable_under_grid_refinement() {
        let mut rng = SeededRng::new(77);
        for _ in 0..5 {
            let t0 = random_symmetric(6, &mut rng).scale(2.0);
            let t1 = random_symmetric(6, &mut rng).scale(2.0);
            let fam = OperatorFamily::linear_pencil(t0, t1).unwrap();
            let coarse = spectral_flow(&fam, 150, FlowMethod::ShiftAlign);
            let fine = spectral_flow(&fam, 300, FlowMethod::ShiftAlign);
            if let (Ok(a), Ok(b)) = (coarse, fine) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn flow_is_additive_under_concatenation() {
        // two pencils sharing the midpoint matrix, concatenated explicitly
        let a = Mat::diag(&[-1.0, 4.0]);
        let b = Mat::diag(&[1.0, 4.0]);
        let c = Mat::diag(&[3.0, -4.0]);
        let first = OperatorFamily::linear_pencil(a.clone(), b.clone()).unwrap();
        let second = OperatorFamily::linear_pencil(b.clone(), c.clone()).unwrap();
        let n = 64usize;
        let mut samples = Vec::new();
        for i in 0..=n {
            samples.push(first.evaluate(i as f64 / n as f64));
        }
        for i in 1..=n {
            samples.push(second.evaluate(i as f64 / n as f64));
        }
        let concat = OperatorFamily::explicit_samples(samples).unwrap();
        let f1 = spectral_flow(&first, n, FlowMethod::ShiftAlign).unwrap();
        let f2 = spectral_flow(&second, n, FlowMethod::ShiftAlign).unwrap();
        let f = spectral_flow(&concat, 2 * n, FlowMethod::ShiftAlign).unwrap();
        assert_eq!(f, f1 + f2);
        assert_eq!(f1 + f2, 1 - 1); // one up-crossing, one down-crossing
    }

    #[test]
    fn minmax_diagonal_case() {
        let report = min_max_check(&Mat::diag(&[1.0, 2.0, 3.0]), 2, 50, 5).unwrap();
        assert!((report.eigen_subspace_max - 2.0).abs() < 1e-12);
        assert!(report.ok());
    }

    #[test]
    fn minmax_random_matrix_no_violation() {
        let mut rng = SeededRng::new(123);
        let t = random_symmetric(10, &mut rng);
        let report = min_max_check(&t, 4, 200, 9).unwrap();
        assert!(report.ok(), "violations: {}", report.violations);
        // random subspaces are strictly worse than the eigen-subspace
        assert!(report.min_trial_max >= report.lambda_k - 1e-9);
    }

    #[test]
    fn rayleigh_distance_inside_subspace_is_zero() {
        let t = Mat::diag(&[1.0, 2.0, 10.0]);
        let report = rayleigh_distance_check(&t, 5.0, &[1.0, 0.0, 0.0]).unwrap();
        assert!(report.distance_sq < 1e-15);
        assert!(report.ok);
    }

    #[test]
    fn rayleigh_distance_frozen_two_dim_case() {
        // cos²θ + 10 sin²θ = 5 ⇒ sin²θ = 4/9; distance to span(e1) is sin θ
        let t = Mat::diag(&[1.0, 10.0]);
        let sin2 = 4.0 / 9.0;
        let x = [math::sqrt(1.0 - sin2), math::sqrt(sin2)];
        let report = rayleigh_distance_check(&t, 5.0, &x).unwrap();
        assert!((report.rayleigh - 5.0).abs() < 1e-12);
        assert!((report.distance_sq - sin2).abs() < 1e-12);
        assert!(report.distance_sq <= 0.5 + 1e-9);
        assert!(report.ok);
    }

    #[test]
    fn rayleigh_distance_random_property() {
        let mut rng = SeededRng::new(40);
        for trial in 0..20 {
            // synthesize a non-negative spectrum with distinct levels
            let n = 6;
            let mut levels: Vec<f64> = (0..n)
                .map(|i| 0.5 + i as f64 + rng.uniform(0.0, 0.4))
                .collect();
            levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let q = linalg::orthonormal_columns(&random_symmetric(n, &mut rng)).unwrap();
            let t = q.matmul(&Mat::diag(&levels)).matmul(&q.transpose()).symmetrized();
            let k = 3usize;
            let cap = 0.5 * (levels[k - 1] + levels[k]);
            let mut x: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
            normalize(&mut x);
            let report = rayleigh_distance_check(&t, cap, &x).unwrap();
            assert!(report.ok, "trial {trial}: d² {} > bound {}", report.distance_sq, report.bound);
        }
    }

    #[test]
    fn rayleigh_distance_reports_precondition_violations() {
        let t = Mat::diag(&[-1.0, 2.0, 3.0]);
        assert!(matches!(
            rayleigh_distance_check(&t, 2.5, &[1.0, 0.0, 0.0]),
            Err(Error::Precondition(_))
        ));
        let t = Mat::diag(&[1.0, 2.0, 3.0]);
        assert!(rayleigh_distance_check(&t, 2.0, &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn paired_branches_duplicated_family() {
        // diag(t, t, t², t²) sampled exactly on the tracking grid
        let n = 50usize;
        let samples: Vec<Mat> = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                Mat::diag(&[t, t, t * t, t * t])
            })
            .collect();
        let fam = OperatorFamily::explicit_samples(samples).unwrap();
        let report = detect_paired_branches(&fam, n, 1e-9).unwrap();
        match report {
            PairingReport::Paired { sup_deviation, .. } => assert!(sup_deviation <= 1e-9),
            other => panic!("expected pairing, got {other:?}"),
        }
    }

    #[test]
    fn paired_branches_simple_eigenvalues_fail_evenness() {
        let fam =
            OperatorFamily::linear_pencil(Mat::diag(&[0.0, 0.0]), Mat::diag(&[1.0, -1.0])).unwrap();
        let report = detect_paired_branches(&fam, 10, 1e-9).unwrap();
        match report {
            PairingReport::EvennessFailed { t } => assert!(t > 0.0),
            other => panic!("expected evenness failure, got {other:?}"),
        }
    }

    #[test]
    fn paired_branches_block_doubled_family() {
        let mut rng = SeededRng::new(8);
        let a = random_symmetric(3, &mut rng);
        let b = random_symmetric(3, &mut rng);
        let c = random_symmetric(3, &mut rng);
        let n = 40usize;
        let samples: Vec<Mat> = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                let block = a.add(&b.scale(t)).add(&c.scale(t * t));
                let mut doubled = Mat::zeros(6, 6);
                for r in 0..3 {
                    for s in 0..3 {
                        doubled[(r, s)] = block[(r, s)];
                        doubled[(r + 3, s + 3)] = block[(r, s)];
                    }
                }
                doubled
            })
            .collect();
        let fam = OperatorFamily::explicit_samples(samples).unwrap();
        let report = detect_paired_branches(&fam, n, 1e-8).unwrap();
        assert!(matches!(report, PairingReport::Paired { .. }), "got {report:?}");
    }

    #[test]
    fn rotating_family_is_an_isospectral_loop() {
        let fam = OperatorFamily::rotating_eigenbundle(vec![1.0, -1.0], 1).unwrap();
        assert!(fam.is_loop());
        for i in 0..8 {
            let sys = eigen_decompose(&fam.evaluate(i as f64 / 7.0)).unwrap();
            assert!((sys.values[0] + 1.0).abs() < 1e-12);
            assert!((sys.values[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pencil_endpoints_reproduce_inputs() {
        let mut rng = SeededRng::new(4);
        let t0 = random_symmetric(4, &mut rng);
        let t1 = random_symmetric(4, &mut rng);
        let fam = OperatorFamily::linear_pencil(t0.clone(), t1.clone()).unwrap();
        assert!(fam.evaluate(0.0).sub(&t0).max_abs() == 0.0);
        assert!(fam.evaluate(1.0).sub(&t1).max_abs() < 1e-15);
    }
}
