//! Sparse general matrix-matrix multiplication (`C = A * B`) on shared
//! memory.
//!
//! Rows of `C` are computed independently by row-wise (Gustavson)
//! accumulation and split across workers by an equal share of
//! multiply-adds. Three accumulators are provided: a linear-probing hash
//! table, a chunked variant that probes a small block of slots at a time,
//! and a k-way heap merge. Each product runs a symbolic pass that sizes the
//! rows of `C` followed by a numeric pass that fills them.
//!
//! ```
//! use spgemm::{spgemm, Algorithm, CsrMatrix, SpgemmConfig};
//!
//! let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![0.0, 3.0]]).unwrap();
//! let b = CsrMatrix::from_dense(&[vec![0.0, 4.0], vec![5.0, 0.0]]).unwrap();
//! let c = spgemm(&a, &b, &SpgemmConfig::new(Algorithm::Hash)).unwrap();
//! assert_eq!(c.to_dense(), vec![vec![10.0, 4.0], vec![15.0, 0.0]]);
//! ```

pub mod accum;
pub mod apps;
pub mod bench;
pub mod cost;
pub mod csr;
pub mod engine;
pub mod error;
pub mod mtx;
pub mod partition;
pub mod recipe;
pub mod reference;
pub mod rmat;

/// Largest row or column count: indices are stored as `u32` but must also
/// fit a signed 32-bit integer.
pub const MAX_DIM: usize = i32::MAX as usize;

pub use accum::{ChunkedHashAccumulator, HashAccumulator, HeapAccumulator, RowAccumulator};
pub use apps::{count_triangles, make_tall_skinny, square, triangle_decompose, TriangleDecomposition};
pub use cost::{estimate_cost, CostEstimate};
pub use csr::{CooTriple, CsrMatrix, Duplicates};
pub use engine::{spgemm, spgemm_with_report, Algorithm, PhaseTimes, SpgemmConfig, SpgemmReport};
pub use error::{Result, SpgemmError};
pub use mtx::{read_matrix_market, write_matrix_market};
pub use partition::{count_flop, rows_to_workers, FlopProfile, RowPartition};
pub use recipe::{select_algorithm, RecipeEntry, RecipeQuery, Scenario};
pub use reference::reference_spgemm;
pub use rmat::{generate, RmatKind, RmatSpec};
