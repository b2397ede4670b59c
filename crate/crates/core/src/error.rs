use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation left the region where the function is analytic
    /// (log branch, division by zero, non-finite result).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("jet order {requested} exceeds the configured maximum {max}")]
    OrderTooLarge { requested: usize, max: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    #[error("phi is not a self-map of the disk: max |phi| on grid = {max_modulus}")]
    SelfMapViolation { max_modulus: f64 },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),

    #[error("operator is not bounded; essential norm and compactness are undefined")]
    NotBounded,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
