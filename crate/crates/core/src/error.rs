use thiserror::Error;

use crate::dsl::{ParseError, SourceSpan};

/// Errors raised while evaluating expressions, building charts or running checks.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeoError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("domain error at {span}: {message}")]
    Domain { message: String, span: SourceSpan },

    #[error("unbound variable '{0}'")]
    UnboundVariable(String),

    #[error("seed index {index} out of range for a point of length {len}")]
    SeedIndex { index: usize, len: usize },

    #[error("metric is not positive definite at {point:?}")]
    NotPositiveDefinite { point: Vec<f64> },

    #[error("metric is ill-conditioned at {point:?} (condition number {condition:.3e})")]
    IllConditioned { point: Vec<f64>, condition: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("degenerate plane: vectors are (nearly) parallel")]
    DegeneratePlane,

    #[error("zero vector")]
    ZeroVector,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter '{name}': {reason}")]
    InvalidParam { name: String, reason: String },

    #[error("unknown {kind} '{name}'; valid names: {}", valid.join(", "))]
    UnknownName {
        kind: &'static str,
        name: String,
        valid: Vec<String>,
    },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = GeoError> = std::result::Result<T, E>;
