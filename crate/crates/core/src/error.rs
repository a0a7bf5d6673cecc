use thiserror::Error;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QtError {
    #[error("spectrum needs at least 2 levels, got {0}")]
    TooFewLevels(usize),

    #[error("levels must be strictly increasing: E[{index}] = {prev} is not below E[{next_index}] = {next}", next_index = index + 1)]
    Degenerate { index: usize, prev: f64, next: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("state is not normalized: norm^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("state is proportional to the uniform vector; its projection onto S is zero")]
    ZeroProjection,

    #[error("eigenstate index {index} out of range for {len} coefficients")]
    Index { index: usize, len: usize },

    #[error("time grid is empty")]
    EmptyGrid,

    #[error("signal is identically zero; log-modulus integral diverges")]
    Divergence,

    #[error("rational approximation failed within denominator cap {cap}: achieved drift bound {achieved:e}, requested {requested:e}")]
    ApproximationFailure {
        cap: u64,
        achieved: f64,
        requested: f64,
    },
}

pub type Result<T> = std::result::Result<T, QtError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> QtError {
    QtError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
