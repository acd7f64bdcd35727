//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A row in an input file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: u64, msg: String },

    /// Input data violates a structural requirement (e.g. non-monotone frames).
    #[error("data error: {0}")]
    Data(String),

    /// A configuration value is out of range or inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// Tensor or trajectory dimensions do not line up.
    #[error("shape error: {0}")]
    Shape(String),

    /// A lookup (agent, frame, window id, ...) found nothing.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// Numerical failure: singular matrix, non-finite value, lost positive-definiteness.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Too few input points for the requested operation.
    #[error("input error: {0}")]
    Input(String),

    /// Speed below the usable threshold for heading/steering estimation.
    /// Callers fall back to the constant-velocity predictor.
    #[error("speed below v_min; fall back to constant velocity")]
    LowSpeed,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
