use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("parameter `{name}` = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    /// A loaded or constructed object breaks one of its invariants. `invariant`
    /// is the short name of the violated property.
    #[error("invariant `{invariant}` violated: {detail}")]
    InvariantViolation { invariant: &'static str, detail: String },

    #[error("channel is not trace preserving")]
    NotTracePreserving,

    #[error("zero vector has no Schmidt decomposition")]
    ZeroVector,

    #[error("filter outcome has zero probability ({probability:e})")]
    ZeroProbability { probability: f64 },

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::InvariantViolation {
            invariant,
            detail: detail.into(),
        }
    }
}
