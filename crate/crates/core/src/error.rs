use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("interpolation and data points coincide for variable {variable} at {value}")]
    CoincidentPoints { variable: String, value: Complex64 },

    #[error("point {value} is not on the grid of variable {variable}")]
    OffGrid { variable: String, value: Complex64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("not enough points: {0}")]
    InsufficientPoints(String),

    #[error(
        "dense Loewner matrix needs {required} bytes, above the limit of {limit} bytes; use the cascaded method"
    )]
    MemoryGuard { required: u128, limit: u128 },

    #[error("degenerate null space: {0}")]
    Degenerate(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
