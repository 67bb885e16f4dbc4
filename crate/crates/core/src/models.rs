//! Exact reference spectra and multiplicity bookkeeping.
//!
//! The round-sphere operator in dimension `m ≥ 2` has eigenvalues
//! `±(m/2 + k)`, `k = 0, 1, 2, …`, the pair at level `k` carrying complex
//! multiplicity `2^⌊m/2⌋ · C(m+k−1, k)`. These windows exercise the
//! alignment and flow machinery against exactly known data. The conversion
//! between complex, real, and spin multiplicities depends on `m mod 8`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use crate::linalg::Mat;
use crate::spectrum::{ordered_spectrum, SpectrumWindow};

/// Window request: levels `k = 0..levels−1` on both signs in dimension `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereSpectrumSpec {
    pub m: u32,
    pub levels: u32,
}

impl SphereSpectrumSpec {
    pub fn new(m: u32, levels: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition("sphere dimension must be at least 2"));
        }
        if levels < 1 {
            return Err(Error::Precondition("need at least one level"));
        }
        Ok(SphereSpectrumSpec { m, levels })
    }
}

/// `C(n, k)` with overflow detection.
fn binomial(n: u64, k: u64) -> Result<u64> {
    let k = k.min(n - k.min(n));
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(n - i)
            .ok_or(Error::MultiplicityOverflow)?
            / (i + 1);
    }
    Ok(acc)
}

/// Complex multiplicity `2^⌊m/2⌋ · C(m+k−1, k)` of the level-`k` eigenvalue
/// pair; refuses to saturate on 64-bit overflow.
pub fn sphere_multiplicity(m: u32, k: u32) -> Result<u64> {
    let half_pow = 1u64
        .checked_shl(m / 2)
        .filter(|_| m / 2 < 64)
        .ok_or(Error::MultiplicityOverflow)?;
    let binom = binomial((m + k - 1) as u64, k as u64)?;
    half_pow.checked_mul(binom).ok_or(Error::MultiplicityOverflow)
}

/// The anchored window of `±(m/2 + k)` for `k = 0..levels−1`, each value
/// repeated with its multiplicity. Half-integer eigenvalues are exactly
/// representable, so the window is exact.
pub fn sphere_spectrum(spec: &SphereSpectrumSpec) -> Result<SpectrumWindow> {
    let mut values: Vec<f64> = Vec::new();
    for k in 0..spec.levels {
        let mu = sphere_multiplicity(spec.m, k)?;
        let mu_usize = usize::try_from(mu).map_err(|_| Error::MultiplicityOverflow)?;
        values
            .len()
            .checked_add(2 * mu_usize)
            .filter(|&total| total <= (1 << 28))
            .ok_or(Error::MultiplicityOverflow)?;
        let lambda = spec.m as f64 / 2.0 + k as f64;
        for _ in 0..mu_usize {
            values.push(lambda);
            values.push(-lambda);
        }
    }
    ordered_spectrum(&values)
}

/// Converts a complex multiplicity to (spin, real) multiplicities by the
/// residue class of the dimension mod 8.
///
/// Residues 2, 3, 4 carry a quaternionic structure, so odd complex
/// multiplicities are refused there.
pub fn multiplicity_convert(m_mod_8: u8, mu_c: u64) -> Result<(u64, u64)> {
    if m_mod_8 > 7 {
        return Err(Error::Precondition("residue class must be 0..7"));
    }
    let double = mu_c.checked_mul(2).ok_or(Error::MultiplicityOverflow)?;
    match m_mod_8 {
        0 | 6 | 7 => Ok((mu_c, mu_c)),
        1 | 5 => Ok((mu_c, double)),
        _ => {
            if mu_c % 2 != 0 {
                return Err(Error::QuaternionicParity { mu_c });
            }
            Ok((mu_c / 2, double))
        }
    }
}

/// Deterministic test-fixture families by kind name.
///
/// Kinds: `"linear-pencil"` (seeded endpoints), `"rotating-eigenbundle"`
/// (`params` = diagonal, one half turn), `"seeded-random-path"` (closed
/// trigonometric loop), `"block-doubled"` (seeded quadratic family twice).
pub fn synthetic_family(kind: &str, dim: usize, params: &[f64], seed: u64) -> Result<OperatorFamily> {
    use crate::family::random_symmetric;
    use crate::rng::SeededRng;
    match kind {
        "linear-pencil" => {
            let mut rng = SeededRng::new(seed);
            let t0 = random_symmetric(dim, &mut rng);
            let t1 = random_symmetric(dim, &mut rng);
            OperatorFamily::linear_pencil(t0, t1)
        }
        "rotating-eigenbundle" => {
            let diag: Vec<f64> = if params.is_empty() {
                let mut d = alloc::vec![1.0, -1.0];
                d.resize(dim.max(2), 0.0);
                d
            } else {
                params.to_vec()
            };
            OperatorFamily::rotating_eigenbundle(diag, 1)
        }
        "seeded-random-path" => OperatorFamily::seeded_random_path(dim, seed),
        "block-doubled" => {
            let mut rng = SeededRng::new(seed);
            let half = dim / 2;
            if half == 0 || dim % 2 != 0 {
                return Err(Error::Precondition("block-doubled needs even dimension"));
            }
            let a = random_symmetric(half, &mut rng);
            let b = random_symmetric(half, &mut rng);
            let c = random_symmetric(half, &mut rng);
            let n = 64usize;
            let samples: Vec<Mat> = (0..=n)
                .map(|i| {
                    let t = i as f64 / n as f64;
                    let block = a.add(&b.scale(t)).add(&c.scale(t * t));
                    let mut doubled = Mat::zeros(dim, dim);
                    for r in 0..half {
                        for s in 0..half {
                            doubled[(r, s)] = block[(r, s)];
                            doubled[(r + half, s + half)] = block[(r, s)];
                        }
                    }
                    doubled
                })
                .collect();
            OperatorFamily::explicit_samples(samples)
        }
        other => Err(Error::UnknownKind(other.to_string())),
    }
}
