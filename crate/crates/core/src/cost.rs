//! Operation-count models for the heap and hash kernels.
//!
//! ```text
//! t_heap = sum_i flop(c_i*) * log2 nnz(a_i*)
//! t_hash = flop * c + [sorted] sum_i nnz(c_i*) * log2 nnz(c_i*)
//! ```
//!
//! `c` is the collision factor (average probes per hash access). Logarithms
//! of arguments <= 1 are taken as 0.

use crate::csr::CsrMatrix;
use crate::engine::{symbolic_phase, Algorithm, SpgemmConfig};
use crate::error::{Result, SpgemmError};
use crate::partition::{rows_to_workers, FlopProfile, RowPartition};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostEstimate {
    pub t_heap: f64,
    pub t_hash: f64,
    pub collision_factor_c: f64,
}

impl CostEstimate {
    /// The kernel with the smaller model cost; heap wins ties only when
    /// strictly cheaper.
    pub fn cheaper(&self) -> Algorithm {
        if self.t_heap < self.t_hash {
            Algorithm::Heap
        } else {
            Algorithm::Hash
        }
    }
}

#[inline]
pub fn log2_guarded(x: u64) -> f64 {
    if x <= 1 {
        0.0
    } else {
        (x as f64).log2()
    }
}

/// Evaluates both models from per-row counts.
pub fn cost_from_counts(
    row_flop: &[u64],
    a_row_nnz: &[usize],
    c_row_nnz: &[usize],
    c: f64,
    sort: bool,
) -> CostEstimate {
    let t_heap = row_flop.iter().zip(a_row_nnz).map(|(&f, &n)| f as f64 * log2_guarded(n as u64)).sum();
    let flop: u64 = row_flop.iter().sum();
    let mut t_hash = flop as f64 * c;
    if sort {
        t_hash += c_row_nnz.iter().map(|&n| n as f64 * log2_guarded(n as u64)).sum::<f64>();
    }
    CostEstimate { t_heap, t_hash, collision_factor_c: c }
}

/// Estimates both kernel costs for `A * B`. Runs a symbolic pass to obtain
/// the output row sizes.
pub fn estimate_cost(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    c: f64,
    sort: bool,
    nworkers: usize,
) -> Result<CostEstimate> {
    if c.is_nan() || c < 1.0 {
        return Err(SpgemmError::InvalidArgument(format!("collision factor {c} must be >= 1")));
    }
    if profile.nrows() != a.nrows() {
        return Err(SpgemmError::InvalidArgument("flop profile does not match A".into()));
    }
    let partition = rows_to_workers(profile, nworkers);
    let cfg = SpgemmConfig::new(Algorithm::Hash).workers(nworkers.max(1));
    Ok(estimate_cost_with(a, b, profile, &partition, c, sort, &cfg))
}

pub(crate) fn estimate_cost_with(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    partition: &RowPartition,
    c: f64,
    sort: bool,
    cfg: &SpgemmConfig,
) -> CostEstimate {
    let c_row_nnz = symbolic_phase(a, b, profile, partition, Algorithm::Hash, cfg);
    let a_row_nnz: Vec<usize> = (0..a.nrows()).map(|i| a.row_nnz(i)).collect();
    cost_from_counts(&profile.per_row, &a_row_nnz, &c_row_nnz, c, sort)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::count_flop;
    use crate::rmat::{er_spec, g500_spec, generate};

    #[test]
    fn heap_model_by_hand() {
        let e = cost_from_counts(&[8], &[2], &[4], 1.0, true);
        assert_eq!(e.t_heap, 8.0);
    }

    #[test]
    fn hash_model_by_hand() {
        let e = cost_from_counts(&[8], &[2], &[4], 1.0, true);
        assert_eq!(e.t_hash, 16.0);
        let u = cost_from_counts(&[8], &[2], &[4], 1.0, false);
        assert_eq!(u.t_hash, 8.0);
        let c = cost_from_counts(&[8], &[2], &[4], 1.5, false);
        assert_eq!(c.t_hash, 12.0);
    }

    #[test]
    fn degenerate_logs_are_zero() {
        assert_eq!(log2_guarded(0), 0.0);
        assert_eq!(log2_guarded(1), 0.0);
        assert_eq!(log2_guarded(2), 1.0);
        let e = cost_from_counts(&[5, 0], &[1, 0], &[1, 0], 1.0, true);
        assert_eq!((e.t_heap, e.t_hash), (0.0, 5.0));
    }

    #[test]
    fn sort_flag_monotonicity_on_generated_inputs() {
        for spec in [er_spec(8, 8, 1), g500_spec(8, 16, 2)] {
            let a = generate(&spec).unwrap();
            let p = count_flop(&a, &a).unwrap();
            let s = estimate_cost(&a, &a, &p, 1.5, true, 2).unwrap();
            let u = estimate_cost(&a, &a, &p, 1.5, false, 2).unwrap();
            assert!(u.t_hash <= s.t_hash);
            assert_eq!(u.t_heap, s.t_heap);
            assert_eq!(u.t_hash, p.total as f64 * 1.5);
        }
    }

    #[test]
    fn rejects_bad_collision_factor() {
        let a = CsrMatrix::identity(2);
        let p = count_flop(&a, &a).unwrap();
        assert!(estimate_cost(&a, &a, &p, 0.5, true, 1).is_err());
    }
}
