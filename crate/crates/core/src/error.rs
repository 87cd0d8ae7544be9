use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate form (determinant 0)")]
    Degenerate,

    #[error("form is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("splitting expression {input:?}, position {position}: {message}")]
    Splitting {
        input: String,
        position: usize,
        message: String,
    },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("no density calibration for p = {prime}: {reason}")]
    Uncalibrated { prime: u64, reason: String },

    #[error("oracle refused: {candidates} candidates exceed budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },

    #[error("invalid descriptor: {0}")]
    Descriptor(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
