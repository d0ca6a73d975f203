//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Fock-space dimension too small to carry the requested operator/state.
    #[error("invalid Fock dimension {dim}: need at least {min}")]
    InvalidDimension { dim: usize, min: usize },

    /// Two objects that must live in the same truncated space do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A vector with (numerically) zero norm cannot be normalized.
    #[error("cannot normalize a zero-norm vector (norm = {norm:.3e})")]
    ZeroNorm { norm: f64 },

    /// Displacement/coherent amplitude too large for the truncation to hold.
    #[error("truncation unsafe: |alpha|^2 = {alpha_sq:.3} exceeds dim/4 = {limit:.3}")]
    TruncationUnsafe { alpha_sq: f64, limit: f64 },

    /// Squeeze magnitude outside the range where the truncated exponential is trustworthy.
    #[error("squeeze parameter r = {r} outside supported range |r| <= {max}")]
    SqueezeOutOfRange { r: f64, max: f64 },

    /// State leaked too much probability into the top of the truncated basis.
    #[error("truncated-state tail mass {tail:.3e} exceeds {limit:.1e}; increase dim")]
    TailMass { tail: f64, limit: f64 },

    /// Superposition parameters make the cat state (numerically) vanish.
    #[error("degenerate cat state: alpha_scs = {alpha_scs}, q = {q}")]
    DegenerateCat { alpha_scs: f64, q: f64 },

    /// Circuit coefficient formulas hit a vanishing denominator.
    #[error("degenerate circuit parameters: {reason}")]
    DegenerateCircuit { reason: String },

    /// Series did not reach the requested tail mass within the term cap.
    #[error("series tail mass {tail:.3e} still above {limit:.1e} at {terms} terms")]
    SeriesNotConverged { tail: f64, limit: f64, terms: usize },

    /// Mixture weights must be non-negative and sum to one.
    #[error("invalid mixture weights: {reason}")]
    BadWeights { reason: String },

    /// A density matrix failed one of its structural checks.
    #[error("invalid density matrix: {reason}")]
    BadDensityMatrix { reason: String },

    /// A numeric evaluation produced a residual above its internal threshold.
    #[error("numeric check failed: {reason}")]
    NumericCheck { reason: String },

    /// A parameter fails basic validation (NaN, out of stated range, ...).
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
