//! Ordered spectral windows and their alignment under integer index shifts.
//!
//! A full spectrum is a non-decreasing function ℤ → ℝ; index 0 is anchored at
//! the first eigenvalue ≥ 0. Finite operators only ever expose a finite
//! window of such a function, so all suprema here run over index overlaps.
//! Distances are measured in the arsinh metric
//! `sup_j |arsinh u(j) − arsinh v(j)|`, under which the index-shift action is
//! by isometries; `align` searches shifts for the closest representative.
//! Which global shift is "the" right one is not decidable from a window
//! alone — callers see the ambiguity explicitly through [`align`] and
//! [`SpectrumWindow::shifted`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::asinh;

/// A finite window of a non-decreasing integer-indexed eigenvalue sequence.
///
/// `values` are eigenvalues counted with multiplicity; entry `i` carries the
/// integer index `j_lo + i`. Windows produced by [`ordered_spectrum`] are
/// anchored (index 0 at the first eigenvalue ≥ 0, or `j_hi = −1` when all
/// values are negative); shifted windows keep the same values under
/// translated indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumWindow {
    values: Vec<f64>,
    j_lo: i64,
}

impl SpectrumWindow {
    /// Window with the given index of its first entry. Values must be
    /// non-decreasing and finite.
    pub fn new(values: Vec<f64>, j_lo: i64) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("spectrum values must be finite"));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Precondition("spectrum values must be non-decreasing"));
        }
        Ok(SpectrumWindow { values, j_lo })
    }

    pub fn empty() -> Self {
        SpectrumWindow { values: Vec::new(), j_lo: 0 }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn j_lo(&self) -> i64 {
        self.j_lo
    }

    /// Index of the last entry; `j_lo − 1` for an empty window.
    pub fn j_hi(&self) -> i64 {
        self.j_lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, j: i64) -> Option<f64> {
        if j < self.j_lo || j > self.j_hi() {
            None
        } else {
            Some(self.values[(j - self.j_lo) as usize])
        }
    }

    /// Entries indexed by `(j, value)` pairs.
    pub fn indexed(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.j_lo + i as i64, v))
    }

    /// The same values with every index translated by `z` (the window slid
    /// `z` places toward higher indices).
    pub fn shifted(&self, z: i64) -> SpectrumWindow {
        SpectrumWindow { values: self.values.clone(), j_lo: self.j_lo + z }
    }

    /// Whether the anchoring convention holds: index 0 sits at the first
    /// value ≥ 0, or all values are negative and `j_hi = −1`.
    pub fn is_anchored(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        match self.values.iter().position(|&v| v >= 0.0) {
            Some(pos) => self.j_lo + pos as i64 == 0,
            None => self.j_hi() == -1,
        }
    }
}

/// Sorts eigenvalues (with multiplicity) into an anchored window: index 0 at
/// the smallest value ≥ 0; if every value is negative, the window ends at
/// index −1.
pub fn ordered_spectrum(eigs: &[f64]) -> Result<SpectrumWindow> {
    if eigs.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if eigs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Precondition("spectrum values must be finite"));
    }
    let mut values: Vec<f64> = eigs.to_vec();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let j_lo = match values.iter().position(|&v| v >= 0.0) {
        Some(pos) => -(pos as i64),
        None => -(values.len() as i64),
    };
    Ok(SpectrumWindow { values, j_lo })
}

/// Contiguous sub-window of entries lying in `[lo, hi]`, preserving the
/// original indices. The slice may be empty.
pub fn spectral_part(s: &SpectrumWindow, lo: f64, hi: f64) -> SpectrumWindow {
    assert!(lo <= hi, "interval endpoints out of order");
    let mut start = None;
    let mut end = 0usize;
    for (i, &v) in s.values.iter().enumerate() {
        if v >= lo && v <= hi {
            if start.is_none() {
                start = Some(i);
            }
            end = i + 1;
        }
    }
    match start {
        None => SpectrumWindow::empty(),
        Some(start) => SpectrumWindow {
            values: s.values[start..end].to_vec(),
            j_lo: s.j_lo + start as i64,
        },
    }
}

/// Sup over the index overlap of `|arsinh u(j) − arsinh v(j)|`; `+∞` when
/// the index ranges are disjoint.
pub fn arsinh_distance(u: &SpectrumWindow, v: &SpectrumWindow) -> f64 {
    let lo = u.j_lo.max(v.j_lo);
    let hi = u.j_hi().min(v.j_hi());
    if lo > hi {
        return f64::INFINITY;
    }
    let mut sup = 0.0f64;
    for j in lo..=hi {
        let a = asinh(u.value_at(j).unwrap());
        let b = asinh(v.value_at(j).unwrap());
        sup = sup.max((a - b).abs());
    }
    sup
}

/// Outcome of a shift search: the chosen shift, the overlap sup-distance
/// there, and how many index pairs that overlap contained.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    pub shift: i64,
    pub distance: f64,
    pub overlap_count: usize,
}

/// Comparison tolerance for sup-distances; closer ties go to the shift
/// preference order.
pub const DISTANCE_TOL: f64 = 1e-12;

fn overlap_count(u: &SpectrumWindow, v: &SpectrumWindow, k: i64) -> usize {
    // pairing u(j) ↔ v(j + k)
    let lo = u.j_lo.max(v.j_lo - k);
    let hi = u.j_hi().min(v.j_hi() - k);
    if lo > hi {
        0
    } else {
        (hi - lo + 1) as usize
    }
}

fn shifted_distance(u: &SpectrumWindow, v: &SpectrumWindow, k: i64) -> f64 {
    let lo = u.j_lo.max(v.j_lo - k);
    let hi = u.j_hi().min(v.j_hi() - k);
    let mut sup = 0.0f64;
    for j in lo..=hi {
        let a = asinh(u.value_at(j).unwrap());
        let b = asinh(v.value_at(j + k).unwrap());
        sup = sup.max((a - b).abs());
    }
    sup
}

/// Finds the shift `k ∈ [−max_shift, max_shift]` minimizing the overlap
/// arsinh sup-distance between `u(j)` and `v(j + k)`, among shifts whose
/// overlap has at least `min_overlap` pairs.
///
/// Distances within [`DISTANCE_TOL`] are treated as tied; ties resolve
/// toward smaller `|k|`, then toward negative `k`. With this convention
/// `align(u, u.shifted(z))` recovers `z`.
pub fn align(
    u: &SpectrumWindow,
    v: &SpectrumWindow,
    max_shift: u32,
    min_overlap: usize,
) -> Result<AlignmentResult> {
    assert!(min_overlap >= 1, "min_overlap must be at least 1");
    let mut best: Option<AlignmentResult> = None;
    // |k| ascending, negative first, so the first strict minimum found wins ties
    let mut shifts: Vec<i64> = Vec::with_capacity(2 * max_shift as usize + 1);
    shifts.push(0);
    for k in 1..=max_shift as i64 {
        shifts.push(-k);
        shifts.push(k);
    }
    for k in shifts {
        let count = overlap_count(u, v, k);
        if count < min_overlap {
            continue;
        }
        let d = shifted_distance(u, v, k);
        let better = match &best {
            None => true,
            Some(b) => d < b.distance - DISTANCE_TOL,
        };
        if better {
            best = Some(AlignmentResult { shift: k, distance: d, overlap_count: count });
        }
    }
    best.ok_or(Error::InsufficientOverlap)
}
