use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite coordinate encountered")]
    NonFinite,

    #[error("scale {t} exceeds the computed horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error("input too large for this operation: {0}")]
    TooLarge(String),

    #[error("point is beyond the reach tube; projection is ambiguous")]
    AmbiguousProjection,

    #[error("point is not on the manifold (residual {residual:.3e})")]
    OffManifold { residual: f64 },

    #[error("need at least {needed} neighbors within the ball, found {found}")]
    InsufficientNeighbors { needed: usize, found: usize },

    #[error("operation requires a noiseless cloud on the manifold")]
    NoisyCloud,

    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
