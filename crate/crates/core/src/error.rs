use thiserror::Error;

/// Errors raised by the transform, calculus, sampling and estimation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MellinError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid spectrum shape: {0}")]
    InvalidSpectrum(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("point must be positive, got {0}")]
    NonPositivePoint(f64),

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("zero norm")]
    ZeroNorm,

    #[error("zero function")]
    ZeroFunction,

    #[error("derivative unavailable for order {0}")]
    DerivativeUnavailable(usize),

    #[error("evaluation failed at x = {x}: {reason}")]
    Evaluation { x: f64, reason: String },

    #[error("sample k = {k} failed: {source}")]
    Sample {
        k: i64,
        #[source]
        source: Box<MellinError>,
    },

    #[error("order {0} overflows the direct moment path")]
    MomentOverflow(usize),
}

pub type Result<T> = std::result::Result<T, MellinError>;
