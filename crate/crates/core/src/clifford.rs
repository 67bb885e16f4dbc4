//! Real Clifford algebras Cl_m, the Spin group inside the even part, and the
//! double cover onto rotation matrices.
//!
//! Generators `e_1, …, e_m` satisfy `e_i² = −1` and anticommute. Elements are
//! stored sparsely as blade → coefficient maps, a blade being a subset of
//! `{1..m}` encoded as a bitmask (bit `i−1` for generator `e_i`). The cover
//! `theta` sends a unit even element `s` to the matrix of `y ↦ s·y·s⁻¹` on
//! grade one; `rotation_lift` produces the explicit preimage of a planar
//! rotation, which changes sign after a full turn downstairs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{det, Mat};
use crate::math;

const COEFF_EPS: f64 = 1e-14;

/// Element of Cl_m as blade-indexed real coefficients; absent blades are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    m: usize,
    coeffs: BTreeMap<u32, f64>,
}

impl CliffordElement {
    pub fn zero(m: usize) -> Self {
        assert!(m <= 24, "generator count out of range");
        CliffordElement { m, coeffs: BTreeMap::new() }
    }

    pub fn scalar(m: usize, c: f64) -> Self {
        let mut e = CliffordElement::zero(m);
        e.add_term(0, c);
        e
    }

    pub fn one(m: usize) -> Self {
        CliffordElement::scalar(m, 1.0)
    }

    /// The generator `e_i`, `1 ≤ i ≤ m`.
    pub fn generator(m: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= m, "generator index out of range");
        let mut e = CliffordElement::zero(m);
        e.add_term(1 << (i - 1), 1.0);
        e
    }

    /// Grade-one element Σ v_i e_i.
    pub fn vector(m: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), m);
        let mut e = CliffordElement::zero(m);
        for (i, &c) in v.iter().enumerate() {
            e.add_term(1 << i, c);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn coeff(&self, blade: u32) -> f64 {
        *self.coeffs.get(&blade).unwrap_or(&0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.coeffs.iter().map(|(&b, &c)| (b, c))
    }

    fn add_term(&mut self, blade: u32, c: f64) {
        debug_assert!(blade < (1u32 << self.m));
        let entry = self.coeffs.entry(blade).or_insert(0.0);
        *entry += c;
        if entry.abs() <= COEFF_EPS {
            self.coeffs.remove(&blade);
        }
    }

    pub fn add(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> CliffordElement {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn scaled(&self, s: f64) -> CliffordElement {
        let mut out = CliffordElement::zero(self.m);
        for (b, c) in self.terms() {
            out.add_term(b, c * s);
        }
        out
    }

    fn check_dim(&self, other: &CliffordElement) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: other.m });
        }
        Ok(())
    }

    /// Grade involution: fixes even blades, negates odd blades.
    pub fn grade_involution(&self) -> CliffordElement {
        let mut out = CliffordElement::zero(self.m);
        for (b, c) in self.terms() {
            let sign = if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(b, sign * c);
        }
        out
    }

    /// Reversal: blade of grade k picks up `(−1)^{k(k−1)/2}`.
    pub fn reverse(&self) -> CliffordElement {
        let mut out = CliffordElement::zero(self.m);
        for (b, c) in self.terms() {
            let k = b.count_ones() as u64;
            let sign = if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(b, sign * c);
        }
        out
    }

    /// The grade-`k` component.
    pub fn grade_part(&self, k: u32) -> CliffordElement {
        let mut out = CliffordElement::zero(self.m);
        for (b, c) in self.terms() {
            if b.count_ones() == k {
                out.add_term(b, c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// Sign of `e_A · e_B`: transpositions to interleave B through A, plus one
/// −1 per repeated generator (from `e_i² = −1`).
fn blade_mul_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let bit_index = low.trailing_zeros();
        // generators of `a` strictly above this one must be crossed
        swaps += (a >> (bit_index + 1)).count_ones();
        rest ^= low;
    }
    let contractions = (a & b).count_ones();
    if (swaps + contractions) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Bilinear Clifford product with `e_i² = −1` and `e_i e_j = −e_j e_i`.
pub fn clifford_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.check_dim(b)?;
    let mut out = CliffordElement::zero(a.m);
    for (ba, ca) in a.terms() {
        for (bb, cb) in b.terms() {
            out.add_term(ba ^ bb, blade_mul_sign(ba, bb) * ca * cb);
        }
    }
    Ok(out)
}

/// Splits into (even, odd) grade parts; their sum is the input exactly.
pub fn grade_split(a: &CliffordElement) -> (CliffordElement, CliffordElement) {
    let mut even = CliffordElement::zero(a.m);
    let mut odd = CliffordElement::zero(a.m);
    for (b, c) in a.terms() {
        if b.count_ones() % 2 == 0 {
            even.add_term(b, c);
        } else {
            odd.add_term(b, c);
        }
    }
    (even, odd)
}

/// Unit element of the even part, optionally with a factorization into unit
/// vectors whose Clifford product equals it.
#[derive(Debug, Clone)]
pub struct SpinElement {
    value: CliffordElement,
    factorization: Option<Vec<Vec<f64>>>,
}

impl SpinElement {
    /// Validates evenness and `value · reverse(value) = 1`.
    pub fn new(value: CliffordElement) -> Result<Self> {
        SpinElement::with_factorization(value, None)
    }

    pub fn with_factorization(
        value: CliffordElement,
        factorization: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let (_, odd) = grade_split(&value);
        if !odd.is_zero() {
            return Err(Error::NotSpinElement { residual: odd.max_coeff_abs() });
        }
        let norm = clifford_mul(&value, &value.reverse())?;
        let mut residual = (norm.coeff(0) - 1.0).abs();
        for (b, c) in norm.terms() {
            if b != 0 {
                residual = residual.max(c.abs());
            }
        }
        if residual > 1e-12 {
            return Err(Error::NotSpinElement { residual });
        }
        if let Some(factors) = &factorization {
            let mut product = CliffordElement::one(value.m);
            for f in factors {
                product = clifford_mul(&product, &CliffordElement::vector(value.m, f))?;
            }
            let diff = product.add(&value.neg())?;
            if diff.max_coeff_abs() > 1e-10 {
                return Err(Error::Precondition("factorization does not multiply to the element"));
            }
        }
        Ok(SpinElement { value, factorization })
    }

    pub fn value(&self) -> &CliffordElement {
        &self.value
    }

    pub fn factorization(&self) -> Option<&[Vec<f64>]> {
        self.factorization.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn neg(&self) -> SpinElement {
        SpinElement { value: self.value.neg(), factorization: None }
    }
}

/// The covering map to SO_m: column `j` is the grade-one part of
/// `s · e_j · s⁻¹` (equal to the twisted adjoint on even elements).
///
/// Fails if conjugation leaks outside grade one; the result is checked to be
/// orthogonal with determinant +1 to 1e−10.
pub fn theta(s: &SpinElement) -> Result<Mat> {
    let m = s.dim();
    let inv = s.value.reverse(); // unit spin element: s⁻¹ = reverse(s)
    let mut out = Mat::zeros(m, m);
    for j in 1..=m {
        let e = CliffordElement::generator(m, j);
        let conj = clifford_mul(&clifford_mul(&s.value, &e)?, &inv)?;
        let vector_part = conj.grade_part(1);
        let leak = conj.add(&vector_part.neg())?.max_coeff_abs();
        if leak > 1e-10 {
            return Err(Error::NotSpinElement { residual: leak });
        }
        for i in 1..=m {
            out[(i - 1, j - 1)] = vector_part.coeff(1 << (i - 1));
        }
    }
    let orth_residual = out.transpose().matmul(&out).sub(&Mat::identity(m)).max_abs();
    let d = det(&out);
    if orth_residual > 1e-10 || (d - 1.0).abs() > 1e-10 {
        return Err(Error::NotSpinElement { residual: orth_residual.max((d - 1.0).abs()) });
    }
    Ok(out)
}

/// Rotation by `alpha` in the plane of the last two coordinates of ℝ^m
/// (identity elsewhere).
pub fn rotation_matrix(m: usize, alpha: f64) -> Mat {
    assert!(m >= 2);
    let mut r = Mat::identity(m);
    let (c, s) = (math::cos(alpha), math::sin(alpha));
    r[(m - 2, m - 2)] = c;
    r[(m - 2, m - 1)] = -s;
    r[(m - 1, m - 2)] = s;
    r[(m - 1, m - 1)] = c;
    r
}

/// The lift `cos(α/2) + sin(α/2) e_{m−1} e_m` of [`rotation_matrix`]`(m, α)`.
///
/// Periodic with period 4π upstairs while the rotation has period 2π, so
/// `rotation_lift(2π) = −rotation_lift(0)`.
pub fn rotation_lift(m: usize, alpha: f64) -> SpinElement {
    assert!(m >= 2);
    let half = alpha / 2.0;
    let mut value = CliffordElement::scalar(m, math::cos(half));
    let plane = (1 << (m - 2)) | (1 << (m - 1));
    value.add_term(plane, math::sin(half));
    // v_{α/4}·w_{α/4} reproduces the element; keeps the reflection oracle available
    let quarter = alpha / 4.0;
    let mut v = alloc::vec![0.0; m];
    let mut w = alloc::vec![0.0; m];
    v[m - 2] = math::cos(quarter);
    v[m - 1] = math::sin(quarter);
    w[m - 2] = -math::cos(quarter);
    w[m - 1] = math::sin(quarter);
    SpinElement::with_factorization(value, Some(alloc::vec![v, w]))
        .expect("rotation lift is a unit even element")
}

/// Reflection matrix along the hyperplane orthogonal to `v`.
pub fn reflection_matrix(v: &[f64]) -> Mat {
    let m = v.len();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    Mat::from_fn(m, m, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - 2.0 * v[i] * v[j] / vv
    })
}

/// Blade-preserving inclusion Cl_m → Cl_{m+1} shifting each generator index
/// up by one, so the induced map on rotations fixes the first coordinate.
pub fn embed(a: &CliffordElement) -> CliffordElement {
    let mut out = CliffordElement::zero(a.m + 1);
    for (b, c) in a.terms() {
        out.add_term(b << 1, c);
    }
    out
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in self.terms() {
            let magnitude = c.abs();
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if b == 0 {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*")?;
                let mut rest = b;
                while rest != 0 {
                    let low = rest & rest.wrapping_neg();
                    write!(f, "e{}", low.trailing_zeros() + 1)?;
                    rest ^= low;
                }
            }
        }
        Ok(())
    }
}

/// Parses the textual format printed by `Display`: terms joined by `+`/`-`,
/// each an optional coefficient, optional `*`, and `e<i>` factors multiplied
/// in written order (so `e2e1` parses as `−e1e2`).
pub fn parse_element(m: usize, input: &str) -> Result<CliffordElement> {
    let mut result = CliffordElement::zero(m);
    let text = input.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty element".to_string()));
    }
    let mut term = String::new();
    let mut terms: Vec<String> = Vec::new();
    for (i, ch) in text.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !term.trim().is_empty() {
            terms.push(term.clone());
            term.clear();
        }
        term.push(ch);
    }
    if !term.trim().is_empty() {
        terms.push(term);
    }
    for raw in terms {
        let t = raw.replace(['*', ' '], "");
        if t.is_empty() {
            return Err(Error::Parse(format!("empty term in \"{input}\"")));
        }
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
        };
        let e_pos = body.find('e').filter(|&p| {
            // an exponent like 1e-3 has digits before 'e'; generators start fresh
            body[p + 1..].chars().next().is_some_and(|c| c.is_ascii_digit())
                && (p == 0 || !is_exponent_context(body, p))
        });
        let (coeff_str, gens_str) = match e_pos {
            Some(p) => (&body[..p], &body[p..]),
            None => (body, ""),
        };
        let coeff: f64 = if coeff_str.is_empty() {
            1.0
        } else {
            coeff_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient \"{coeff_str}\"")))?
        };
        let mut element = CliffordElement::scalar(m, sign * coeff);
        for gen in gens_str.split('e').filter(|s| !s.is_empty()) {
            let idx: usize =
                gen.parse().map_err(|_| Error::Parse(format!("bad generator \"e{gen}\"")))?;
            if idx < 1 || idx > m {
                return Err(Error::Parse(format!("generator e{idx} outside 1..={m}")));
            }
            element = clifford_mul(&element, &CliffordElement::generator(m, idx))?;
        }
        result = result.add(&element)?;
    }
    Ok(result)
}

fn is_exponent_context(body: &str, p: usize) -> bool {
    // 'e' directly preceded by a digit or '.' and followed by digits/sign is
    // part of a float literal only if a sign or second digit follows; a bare
    // digit after 'e' is ambiguous and we resolve it as a generator.
    let before = body[..p].chars().last();
    let after = &body[p + 1..];
    before.is_some_and(|c| c.is_ascii_digit() || c == '.')
        && after.starts_with(['+', '-'])
}
