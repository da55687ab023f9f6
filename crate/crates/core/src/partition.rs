//! Flop counting and flop-balanced static row assignment.
//!
//! Each row's flop is the number of scalar multiplications it needs:
//! `sum over a_ik of nnz(b_k*)`. An exclusive prefix sum over those counts
//! lets every worker find its first row by binary search for the point where
//! the running total reaches `total * t / nworkers`.

use std::ops::Range;

use crate::csr::CsrMatrix;
use crate::error::{Result, SpgemmError};
use crate::reference::check_conformant;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopProfile {
    pub per_row: Vec<u64>,
    /// Exclusive scan of `per_row`, length `nrows + 1`.
    pub prefix: Vec<u64>,
    pub total: u64,
}

impl FlopProfile {
    pub fn from_per_row(per_row: Vec<u64>) -> Self {
        Self::from_per_row_with_workers(per_row, 1)
    }

    pub fn from_per_row_with_workers(per_row: Vec<u64>, nworkers: usize) -> Self {
        let prefix = exclusive_scan(&per_row, nworkers);
        let total = *prefix.last().unwrap();
        Self { per_row, prefix, total }
    }

    pub fn nrows(&self) -> usize {
        self.per_row.len()
    }

    pub fn max_row(&self) -> u64 {
        self.per_row.iter().copied().max().unwrap_or(0)
    }

    pub fn max_row_in(&self, rows: Range<usize>) -> u64 {
        self.per_row[rows].iter().copied().max().unwrap_or(0)
    }

    pub fn range_flop(&self, rows: Range<usize>) -> u64 {
        self.prefix[rows.end] - self.prefix[rows.start]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowPartition {
    pub offsets: Vec<usize>,
}

impl RowPartition {
    pub fn nworkers(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn range(&self, t: usize) -> Range<usize> {
        self.offsets[t]..self.offsets[t + 1]
    }

    pub fn ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.offsets.windows(2).map(|w| w[0]..w[1])
    }

    /// Contiguous equal-count split, used before flop is known.
    pub fn uniform(nrows: usize, nworkers: usize) -> Self {
        let nworkers = nworkers.max(1);
        Self { offsets: (0..=nworkers).map(|t| nrows * t / nworkers).collect() }
    }
}

/// Runs `f` once per range on its own scoped thread and returns the results
/// in range order. A single range runs on the calling thread.
pub(crate) fn fork_join<T, F>(ranges: &[Range<usize>], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, Range<usize>) -> T + Sync,
{
    if ranges.len() == 1 {
        return vec![f(0, ranges[0].clone())];
    }
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> =
            ranges.iter().cloned().enumerate().map(|(t, r)| s.spawn(move || f(t, r))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Splits `data` into consecutive mutable pieces of the given lengths.
pub(crate) fn split_lengths<T>(mut data: &mut [T], lens: impl Iterator<Item = usize>) -> Vec<&mut [T]> {
    let mut out = Vec::new();
    for len in lens {
        let (head, tail) = data.split_at_mut(len);
        out.push(head);
        data = tail;
    }
    out
}

/// Exclusive prefix sum, computed in two blocked passes when `nworkers > 1`.
pub fn exclusive_scan(values: &[u64], nworkers: usize) -> Vec<u64> {
    let n = values.len();
    let mut out = vec![0u64; n + 1];
    let nworkers = nworkers.max(1).min(n.max(1));
    if nworkers == 1 || n < 4096 {
        let mut acc = 0u64;
        for (o, &v) in out[1..].iter_mut().zip(values) {
            acc += v;
            *o = acc;
        }
        return out;
    }
    let part = RowPartition::uniform(n, nworkers);
    let ranges: Vec<_> = part.ranges().collect();
    // pass 1: local inclusive scans written in place, block sums returned
    let sums: Vec<u64> = {
        let pieces = split_lengths(&mut out[1..], ranges.iter().map(|r| r.len()));
        std::thread::scope(|s| {
            let handles: Vec<_> = pieces
                .into_iter()
                .zip(ranges.iter().cloned())
                .map(|(piece, r)| {
                    s.spawn(move || {
                        let mut acc = 0u64;
                        for (o, &v) in piece.iter_mut().zip(&values[r]) {
                            acc += v;
                            *o = acc;
                        }
                        acc
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };
    // pass 2: add the carry of all preceding blocks
    let mut carry = vec![0u64; sums.len()];
    for t in 1..sums.len() {
        carry[t] = carry[t - 1] + sums[t - 1];
    }
    let pieces = split_lengths(&mut out[1..], ranges.iter().map(|r| r.len()));
    std::thread::scope(|s| {
        for (piece, &c) in pieces.into_iter().zip(&carry) {
            if c > 0 {
                s.spawn(move || piece.iter_mut().for_each(|x| *x += c));
            }
        }
    });
    out
}

pub fn count_flop(a: &CsrMatrix, b: &CsrMatrix) -> Result<FlopProfile> {
    count_flop_with_workers(a, b, 1)
}

pub fn count_flop_with_workers(a: &CsrMatrix, b: &CsrMatrix, nworkers: usize) -> Result<FlopProfile> {
    check_conformant(a, b)?;
    let nrows = a.nrows();
    let mut per_row = vec![0u64; nrows];
    let b_rpts = b.rpts();
    let fill = |rows: Range<usize>, out: &mut [u64]| {
        for (i, o) in rows.zip(out.iter_mut()) {
            let (acols, _) = a.row(i);
            *o = acols.iter().map(|&k| (b_rpts[k as usize + 1] - b_rpts[k as usize]) as u64).sum();
        }
    };
    let part = RowPartition::uniform(nrows, nworkers.max(1).min(nrows.max(1)));
    if part.nworkers() == 1 {
        fill(0..nrows, &mut per_row);
    } else {
        let pieces = split_lengths(&mut per_row, part.ranges().map(|r| r.len()));
        std::thread::scope(|s| {
            for (piece, r) in pieces.into_iter().zip(part.ranges()) {
                let fill = &fill;
                s.spawn(move || fill(r, piece));
            }
        });
    }
    Ok(FlopProfile::from_per_row_with_workers(per_row, nworkers))
}

/// Minimum index `id` with `vec[id] >= value`; `vec.len()` when none.
pub fn lower_bound(vec: &[u64], value: u64) -> usize {
    vec.partition_point(|&x| x < value)
}

/// Assigns contiguous row ranges so each worker receives roughly
/// `total / nworkers` flop. Thresholds use exact integer arithmetic.
pub fn rows_to_workers(profile: &FlopProfile, nworkers: usize) -> RowPartition {
    let nworkers = nworkers.max(1);
    let nrows = profile.nrows();
    let mut offsets = Vec::with_capacity(nworkers + 1);
    offsets.push(0);
    for t in 1..nworkers {
        let threshold = (profile.total as u128 * t as u128 / nworkers as u128) as u64;
        offsets.push(lower_bound(&profile.prefix, threshold).min(nrows));
    }
    offsets.push(nrows);
    RowPartition { offsets }
}

/// Total flop divided by the number of stored output entries.
pub fn compression_ratio(profile: &FlopProfile, c: &CsrMatrix) -> Result<f64> {
    if c.nnz() == 0 {
        return Err(SpgemmError::EmptyProduct);
    }
    Ok(profile.total as f64 / c.nnz() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::reference_spgemm;
    use crate::rmat::{er_spec, g500_spec, generate};
    use proptest::prelude::*;

    fn worked() -> (CsrMatrix, CsrMatrix) {
        (
            CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![2.0, 3.0]]).unwrap(),
            CsrMatrix::from_dense(&[vec![0.0, 4.0], vec![5.0, 0.0]]).unwrap(),
        )
    }

    #[test]
    fn worked_flop() {
        let (a, b) = worked();
        let p = count_flop(&a, &b).unwrap();
        assert_eq!(p.per_row, vec![1, 2]);
        assert_eq!(p.total, 3);
        assert_eq!(p.prefix, vec![0, 1, 3]);
        let c = reference_spgemm(&a, &b).unwrap();
        assert_eq!(compression_ratio(&p, &c).unwrap(), 1.0);
    }

    #[test]
    fn identity_flop_is_row_nnz() {
        let b = generate(&er_spec(5, 4, 1)).unwrap();
        let p = count_flop(&CsrMatrix::identity(32), &b).unwrap();
        for i in 0..32 {
            assert_eq!(p.per_row[i], b.row_nnz(i) as u64);
        }
    }

    #[test]
    fn flop_matches_brute_force_triple_loop() {
        for (seed, spec) in [(1, er_spec(8, 4, 1)), (2, g500_spec(8, 8, 2)), (3, g500_spec(6, 16, 3))] {
            let a = generate(&spec).unwrap();
            let d = a.to_dense();
            let n = d.len();
            let mut brute = vec![0u64; n];
            for i in 0..n {
                for k in 0..n {
                    if d[i][k] != 0.0 {
                        brute[i] += d[k].iter().filter(|&&x| x != 0.0).count() as u64;
                    }
                }
            }
            let p = count_flop(&a, &a).unwrap();
            assert_eq!(p.per_row, brute, "seed {seed}");
            assert_eq!(p.total, brute.iter().sum::<u64>());
            let c = reference_spgemm(&a, &a).unwrap();
            assert!(c.nnz() as u64 <= p.total);
            let par = count_flop_with_workers(&a, &a, 3).unwrap();
            assert_eq!(par, p);
        }
    }

    #[test]
    fn hand_trace_partition() {
        let p = FlopProfile::from_per_row(vec![4, 1, 1, 2]);
        assert_eq!(p.prefix, vec![0, 4, 5, 6, 8]);
        let part = rows_to_workers(&p, 2);
        assert_eq!(part.offsets, vec![0, 1, 4]);
        assert_eq!(p.range_flop(part.range(0)), 4);
        assert_eq!(p.range_flop(part.range(1)), 4);
        assert_eq!(rows_to_workers(&p, 1).offsets, vec![0, 4]);
    }

    #[test]
    fn more_workers_than_rows() {
        let p = FlopProfile::from_per_row(vec![3, 3]);
        let part = rows_to_workers(&p, 5);
        assert_eq!(part.nworkers(), 5);
        assert_eq!(*part.offsets.last().unwrap(), 2);
        assert!(part.offsets.windows(2).all(|w| w[0] <= w[1]));
        let empty = rows_to_workers(&FlopProfile::from_per_row(vec![]), 3);
        assert_eq!(empty.offsets, vec![0, 0, 0, 0]);
    }

    #[test]
    fn compression_ratio_of_empty_product() {
        let p = FlopProfile::from_per_row(vec![0]);
        assert!(matches!(compression_ratio(&p, &CsrMatrix::zeros(1, 1)), Err(SpgemmError::EmptyProduct)));
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let v: Vec<u64> = (0..10_000u64).map(|i| (i * 7919) % 13).collect();
        assert_eq!(exclusive_scan(&v, 1), exclusive_scan(&v, 4));
        assert_eq!(exclusive_scan(&v, 1), exclusive_scan(&v, 7));
    }

    proptest! {
        #[test]
        fn balance_bound(per_row in proptest::collection::vec(0u64..1000, 0..300), nworkers in 1usize..40) {
            let p = FlopProfile::from_per_row(per_row);
            let part = rows_to_workers(&p, nworkers);
            prop_assert_eq!(part.offsets[0], 0);
            prop_assert_eq!(*part.offsets.last().unwrap(), p.nrows());
            prop_assert!(part.offsets.windows(2).all(|w| w[0] <= w[1]));
            let bound = p.total.div_ceil(nworkers as u64) + p.max_row();
            for r in part.ranges() {
                prop_assert!(p.range_flop(r) <= bound);
            }
        }
    }
}
