use thiserror::Error;

/// Errors raised by the geometry, solver and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("direction must be a unit vector (norm = {0})")]
    NonUnitDirection(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lies outside the body")]
    OutsideBody,
    #[error("function is negative on the body (min value {0:e})")]
    NegativeFunction(f64),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("slope {m} outside [-{m0}, {m0}]")]
    SlopeOutOfRange { m: f64, m0: f64 },
    #[error("degenerate cone (r = m = 0)")]
    DegenerateCone,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("random instance generation failed after {0} retries")]
    RetryExhausted(usize),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

impl Error {
    /// True for errors caused by degenerate geometry rather than malformed input.
    pub fn is_geometric(&self) -> bool {
        matches!(
            self,
            Error::DegenerateBody(_) | Error::DegenerateCone | Error::NoConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
