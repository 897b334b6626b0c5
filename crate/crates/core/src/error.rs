use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for n = {n} (must be below 2^{bits})")]
    IndexOutOfRange { n: usize, index: u128, bits: usize },

    #[error("dimension {n} not supported here: {reason}")]
    Dimension { n: usize, reason: &'static str },

    #[error("not a unit lower-triangular (0,1) matrix: entry ({row}, {col}) = {value}")]
    InvalidPattern { row: usize, col: usize, value: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{method} did not converge: {detail}")]
    Convergence {
        method: &'static str,
        detail: String,
    },

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error(
        "run stopped after {blocks_completed} of {blocks_total} blocks; resume from the checkpoint"
    )]
    Interrupted {
        blocks_completed: u64,
        blocks_total: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
