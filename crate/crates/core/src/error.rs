//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Numeric refusals and contract violations.
///
/// Every variant corresponds to a situation the library detects and refuses
/// to guess about, rather than a bug; messages are stable and are printed
/// verbatim by the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `ordered_spectrum` was handed no eigenvalues.
    EmptySpectrum,
    /// No shift in range had the requested index overlap.
    InsufficientOverlap,
    /// Two operands live in different dimensions.
    DimensionMismatch { expected: usize, got: usize },
    /// Input matrix is not symmetric within tolerance.
    NotSymmetric { max_asymmetry: f64 },
    /// A linear solve hit a (numerically) singular matrix.
    SingularMatrix,
    /// An interval endpoint is too close to an eigenvalue.
    EndpointHitsSpectrum { endpoint: f64, eigenvalue: f64 },
    /// A resolvent solve failed at a quadrature node.
    ResolventSingular { node: usize },
    /// Eigenvector overlaps between consecutive samples are all below the
    /// matching threshold.
    GridTooCoarse { step: usize },
    /// Consecutive subspace samples are too far apart to propagate a frame.
    LoopSamplingTooCoarse { step: usize },
    /// The projector rank changed along a loop that must have constant rank.
    RankChanged { sample: usize, expected: usize, got: usize },
    /// The spectral gap at an interval endpoint collapsed at a sample.
    GapViolated { sample: usize, margin: f64 },
    /// Spectral flow requires both endpoint spectra bounded away from zero.
    ZeroEndpointEigenvalue { eigenvalue: f64 },
    /// A multiplicity count does not fit in 64 bits.
    MultiplicityOverflow,
    /// Odd complex multiplicity in a quaternionic dimension class.
    QuaternionicParity { mu_c: u64 },
    /// Conjugation by the element produced grades other than one.
    NotSpinElement { residual: f64 },
    /// A frame expected to be orthonormal is not.
    NotOrthonormal { residual: f64 },
    /// A subspace expected to be invariant under the loop is not.
    InvarianceFailed { sample: usize, residual: f64 },
    /// The matrix loop does not close up to a global sign.
    LoopDoesNotClose { residual: f64 },
    /// The family is not a closed loop but the operation needs one.
    NotALoop,
    /// The operation needs a different family kind.
    WrongFamilyKind { expected: &'static str },
    /// A Gram matrix is not positive definite within tolerance.
    NotPositiveDefinite { min_eigenvalue: f64 },
    /// Sign stability hypothesis held but the propagated signs disagree;
    /// indicates numerically unreliable certificates.
    SignDisagreement { sign_a: i8, sign_b: i8 },
    /// The closure matrix is too far from orthogonal to trust its sign.
    UnreliableCertificate { det_abs: f64 },
    /// A textual Clifford element failed to parse.
    Parse(String),
    /// Unknown synthetic family kind.
    UnknownKind(String),
    /// A stated precondition does not hold.
    Precondition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySpectrum => write!(f, "empty spectrum"),
            Error::InsufficientOverlap => write!(f, "insufficient overlap"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotSymmetric { max_asymmetry } => {
                write!(f, "matrix not symmetric (max asymmetry {max_asymmetry:e})")
            }
            Error::SingularMatrix => write!(f, "singular matrix"),
            Error::EndpointHitsSpectrum { endpoint, eigenvalue } => write!(
                f,
                "interval endpoint hits spectrum: endpoint {endpoint} is too close to eigenvalue {eigenvalue}"
            ),
            Error::ResolventSingular { node } => {
                write!(f, "resolvent solve singular at quadrature node {node}")
            }
            Error::GridTooCoarse { step } => write!(f, "grid too coarse at step {step}"),
            Error::LoopSamplingTooCoarse { step } => {
                write!(f, "loop sampling too coarse at step {step}")
            }
            Error::RankChanged { sample, expected, got } => write!(
                f,
                "projector rank changed at sample {sample}: expected {expected}, got {got}"
            ),
            Error::GapViolated { sample, margin } => write!(
                f,
                "spectral gap violated at sample {sample} (margin {margin:e})"
            ),
            Error::ZeroEndpointEigenvalue { eigenvalue } => write!(
                f,
                "endpoint spectrum contains a near-zero eigenvalue ({eigenvalue:e})"
            ),
            Error::MultiplicityOverflow => {
                write!(f, "multiplicity overflows 64-bit integer arithmetic")
            }
            Error::QuaternionicParity { mu_c } => write!(
                f,
                "violates quaternionic structure: complex multiplicity {mu_c} must be even"
            ),
            Error::NotSpinElement { residual } => {
                write!(f, "not a spin element (higher-grade residual {residual:e})")
            }
            Error::NotOrthonormal { residual } => {
                write!(f, "frame not orthonormal (residual {residual:e})")
            }
            Error::InvarianceFailed { sample, residual } => write!(
                f,
                "subspace not invariant at sample {sample} (residual {residual:e})"
            ),
            Error::LoopDoesNotClose { residual } => {
                write!(f, "loop does not close up to a sign (residual {residual:e})")
            }
            Error::NotALoop => write!(f, "family is not a closed loop"),
            Error::WrongFamilyKind { expected } => {
                write!(f, "operation requires a {expected} family")
            }
            Error::NotPositiveDefinite { min_eigenvalue } => write!(
                f,
                "matrix not positive definite (smallest eigenvalue {min_eigenvalue:e})"
            ),
            Error::SignDisagreement { sign_a, sign_b } => write!(
                f,
                "stability hypothesis met but signs disagree ({sign_a} vs {sign_b})"
            ),
            Error::UnreliableCertificate { det_abs } => write!(
                f,
                "closure matrix numerically unreliable (|det| = {det_abs:e} < 0.5)"
            ),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::UnknownKind(kind) => write!(f, "unknown family kind \"{kind}\""),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
