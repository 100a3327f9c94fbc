use thiserror::Error;

use crate::parse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix shape mismatch: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    ShapeMismatch { expected_rows: usize, expected_cols: usize, rows: usize, cols: usize },

    #[error("space dimension must be positive")]
    ZeroDimension,

    #[error("matrix is not invertible")]
    Singular,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("map is not smooth: {0}")]
    NotSmooth(String),

    /// An internal consistency check failed. Never expected; signals a bug.
    #[error("internal assertion failed: {0}")]
    Assertion(String),

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("degree {degree} exceeds the limit of {limit}")]
    DegreeTooLarge { degree: u32, limit: u32 },

    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },

    #[error("invalid space file: {0}")]
    SpaceFile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
