use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpgemmError {
    #[error("entry ({row}, {col}) is outside a {nrows}x{ncols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },

    #[error("dimension {0} exceeds the 32-bit column index limit of {max}", max = crate::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("invalid CSR structure: {0}")]
    InvalidStructure(String),

    #[error("dimension mismatch: A is {a_rows}x{a_cols}, B is {b_rows}x{b_cols}")]
    DimensionMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    #[error("permutation of length {len} is not a bijection on [0, {n})")]
    NotAPermutation { len: usize, n: usize },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("heap kernel requires row-sorted inputs")]
    UnsortedInput,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("compression ratio undefined for an empty product")]
    EmptyProduct,

    #[error("adjacency pattern is not symmetric: ({row}, {col}) has no mirror entry")]
    NotSymmetric { row: usize, col: usize },

    #[error("no recipe entry for {0}")]
    NoRecipe(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, SpgemmError>;
