use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tail mass {tail:.3e} exceeds tolerance {limit:.3e} (Fock cutoff too small)")]
    TailMass { tail: f64, limit: f64 },

    #[error(
        "insufficient Fock headroom: input support {support} with noise {noise} needs dim >= {required}, got {dim}"
    )]
    Headroom {
        support: usize,
        noise: f64,
        required: usize,
        dim: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tensor dimension {dim} exceeds the limit {limit}")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not one (got {0})")]
    InvalidTrace(f64),

    #[error("operator is not positive (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("numerical convergence failure: {0}")]
    Convergence(String),

    #[error("identity check failed: {what} residual {residual:.3e} above {tolerance:.1e}")]
    IdentityViolation {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("value {value} outside the attained range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
