use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed carpet: {0}")]
    MalformedCarpet(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbVector(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument {value} outside domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("word of length {len} is shorter than required depth {needed}")]
    WordTooShort { len: usize, needed: usize },

    #[error("schedule does not cover position {0}")]
    ScheduleTooShort(usize),

    #[error("target word of length {len} is shorter than f(n) = {needed}")]
    TargetTooShort { len: usize, needed: usize },

    #[error("words have mismatched lengths ({expected} vs {found})")]
    LengthMismatch { expected: usize, found: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("optimizer failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("large-alpha certification failed at alpha = {alpha}: got {got}, expected {expected}")]
    CertificationFailure { alpha: f64, got: f64, expected: f64 },

    #[error("property violated: {0}")]
    PropertyViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
