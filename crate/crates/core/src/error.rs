use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("memory budget of {memory_bytes} bytes cannot hold {rows} row(s) of {slot_bits} bits per slot")]
    BudgetTooSmall {
        memory_bytes: usize,
        rows: usize,
        slot_bits: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sketches are incompatible: {0}")]
    Incompatible(String),

    #[error("similarity is undefined: both inputs are empty")]
    UndefinedSimilarity,

    #[error("counter overflow in row {row}, slot {slot}")]
    CounterOverflow { row: usize, slot: usize },

    #[error("row {row} is saturated: a counter spanning the whole row overflowed")]
    RowSaturated { row: usize },

    #[error("input set is empty")]
    EmptySet,

    #[error("degenerate estimate: {0}")]
    Degenerate(String),

    #[error("relative error is undefined when the true similarity is zero")]
    ZeroTruth,

    #[error("malformed input {path}: {detail}")]
    Malformed { path: PathBuf, detail: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
