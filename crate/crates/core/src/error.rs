use thiserror::Error;

/// Errors raised by the toolkit. Every variant carries enough context to
/// name the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("coverage error: requested {requested} but data covers only up to {available} (short by {})", requested - available)]
    Coverage { requested: f64, available: f64 },

    #[error("resource error: {0}")]
    Resource(String),

    #[error("pole: {what} at {re}{im:+}i")]
    Pole { what: String, re: f64, im: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("truncation: tail estimate {tail} exceeds tolerance {tolerance}")]
    Truncation { tail: f64, tolerance: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ordinates not strictly increasing on line {line}: {previous} followed by {next}")]
    NonMonotone { line: usize, previous: f64, next: f64 },

    #[error("empty input: no ordinates found")]
    EmptyInput,

    #[error("T = {0} sits on a zero ordinate; S(T) is ambiguous at a jump")]
    JumpPoint(f64),

    #[error("offset fit rejected: residual spread {spread} exceeds limit {limit}")]
    FitRejected { spread: f64, limit: f64 },

    #[error("unsupported region: {0}")]
    Unsupported(String),

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
