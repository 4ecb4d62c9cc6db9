use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed walk at step {index}: {reason}")]
    MalformedWalk { index: usize, reason: String },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("quadrature did not converge: estimate {value:e}, error bound {error:e} > tolerance {tolerance:e}")]
    QuadratureNotConverged { value: f64, error: f64, tolerance: f64 },

    #[error("instance too large for exact computation: {0}")]
    TooLarge(String),

    #[error("loop-erased walk exceeded its step budget of {budget} steps (erased length {reached} of {target})")]
    StepBudgetExceeded { budget: u64, reached: u64, target: u64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("missing column `{column}` in {path}")]
    MissingColumn { column: String, path: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
