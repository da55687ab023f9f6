//! Parallel row-wise SpGEMM drivers.
//!
//! Hash kernels run two passes over the same flop-balanced row partition:
//! a symbolic pass counting `nnz(c_i*)`, a prefix sum building `rpts_C`,
//! then a numeric pass writing each row straight into its final slot. The
//! heap kernel runs one pass, staging rows per worker and copying them out
//! after the row sizes are known.
//!
//! Workers own their accumulators and output slices; nothing mutable is
//! shared between them.

use std::time::{Duration, Instant};

use crate::accum::{
    ChunkedHashAccumulator, HashAccumulator, HeapAccumulator, RowAccumulator, DEFAULT_HASH_MULTIPLIER,
};
use crate::cost::{estimate_cost_with, CostEstimate};
use crate::csr::CsrMatrix;
use crate::error::{Result, SpgemmError};
use crate::partition::{count_flop_with_workers, exclusive_scan, fork_join, rows_to_workers, split_lengths, FlopProfile, RowPartition};
use crate::recipe::{select_algorithm, RecipeQuery};
use crate::reference::{check_conformant, reference_spgemm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Hash,
    HashChunked,
    Heap,
    Reference,
    Auto,
}

impl Algorithm {
    pub const KERNELS: [Algorithm; 3] = [Algorithm::Hash, Algorithm::HashChunked, Algorithm::Heap];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hash => "hash",
            Self::HashChunked => "hashchunked",
            Self::Heap => "heap",
            Self::Reference => "reference",
            Self::Auto => "auto",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = SpgemmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hash" => Ok(Self::Hash),
            "hashchunked" | "hashvec" | "hashvector" => Ok(Self::HashChunked),
            "heap" => Ok(Self::Heap),
            "reference" | "spa" => Ok(Self::Reference),
            "auto" => Ok(Self::Auto),
            _ => Err(SpgemmError::InvalidArgument(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpgemmConfig {
    pub algorithm: Algorithm,
    pub sort_output: bool,
    pub nworkers: usize,
    /// Slots per chunk for [`Algorithm::HashChunked`]: 4, 8 or 16.
    pub chunk_width: usize,
    pub hash_multiplier: u64,
    /// Assumed average probes per hash access, used only by `Auto`.
    pub collision_factor: f64,
    /// Scenario metadata; when present `Auto` follows the recipe table.
    pub recipe: Option<RecipeQuery>,
}

impl Default for SpgemmConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Hash,
            sort_output: true,
            nworkers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            chunk_width: 8,
            hash_multiplier: DEFAULT_HASH_MULTIPLIER,
            collision_factor: 1.5,
            recipe: None,
        }
    }
}

impl SpgemmConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self { algorithm, ..Self::default() }
    }

    pub fn sorted(mut self, sort_output: bool) -> Self {
        self.sort_output = sort_output;
        self
    }

    pub fn workers(mut self, nworkers: usize) -> Self {
        self.nworkers = nworkers;
        self
    }

    pub fn chunk_width(mut self, w: usize) -> Self {
        self.chunk_width = w;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nworkers < 1 {
            return Err(SpgemmError::InvalidArgument("nworkers must be at least 1".into()));
        }
        if ![4, 8, 16].contains(&self.chunk_width) {
            return Err(SpgemmError::InvalidArgument(format!(
                "chunk width {} not in {{4, 8, 16}}",
                self.chunk_width
            )));
        }
        if self.collision_factor.is_nan() || self.collision_factor < 1.0 {
            return Err(SpgemmError::InvalidArgument("collision factor must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimes {
    /// Flop counting and row partitioning.
    pub setup: Duration,
    pub symbolic: Duration,
    pub numeric: Duration,
    pub total: Duration,
}

#[derive(Clone, Debug)]
pub struct SpgemmReport {
    pub matrix: CsrMatrix,
    /// Kernel that actually ran (`Auto` resolved).
    pub algorithm: Algorithm,
    pub flop: u64,
    pub times: PhaseTimes,
    /// Measured probes per access over the numeric pass (hash kernels only).
    pub collision_factor: Option<f64>,
}

pub fn spgemm(a: &CsrMatrix, b: &CsrMatrix, cfg: &SpgemmConfig) -> Result<CsrMatrix> {
    spgemm_with_report(a, b, cfg).map(|r| r.matrix)
}

pub fn spgemm_with_report(a: &CsrMatrix, b: &CsrMatrix, cfg: &SpgemmConfig) -> Result<SpgemmReport> {
    cfg.validate()?;
    check_conformant(a, b)?;
    let start = Instant::now();

    if cfg.algorithm == Algorithm::Reference {
        let matrix = reference_spgemm(a, b)?;
        let flop = count_flop_with_workers(a, b, 1)?.total;
        let elapsed = start.elapsed();
        let times = PhaseTimes { numeric: elapsed, total: elapsed, ..Default::default() };
        return Ok(SpgemmReport { matrix, algorithm: Algorithm::Reference, flop, times, collision_factor: None });
    }

    let profile = count_flop_with_workers(a, b, cfg.nworkers)?;
    let partition = rows_to_workers(&profile, cfg.nworkers);
    let setup = start.elapsed();

    let algorithm = match cfg.algorithm {
        Algorithm::Auto => resolve_auto(a, b, &profile, &partition, cfg)?,
        Algorithm::Heap if !(a.is_sorted() && b.is_sorted()) => return Err(SpgemmError::UnsortedInput),
        other => other,
    };

    let mut times = PhaseTimes { setup, ..Default::default() };
    let (matrix, collision_factor) = match algorithm {
        Algorithm::Heap => {
            let t = Instant::now();
            let m = heap_spgemm(a, b, &profile, &partition);
            times.numeric = t.elapsed();
            (m, None)
        }
        Algorithm::Hash | Algorithm::HashChunked => {
            let t = Instant::now();
            let row_nnz = symbolic_phase(a, b, &profile, &partition, algorithm, cfg);
            let rpts = rpts_from_row_nnz(&row_nnz, cfg.nworkers);
            times.symbolic = t.elapsed();
            let t = Instant::now();
            let (cols, vals, c) = numeric_dispatch(a, b, &profile, &rpts, &partition, algorithm, cfg);
            times.numeric = t.elapsed();
            let m = CsrMatrix::from_parts(a.nrows(), b.ncols(), rpts, cols, vals, cfg.sort_output);
            (m, Some(c))
        }
        Algorithm::Reference | Algorithm::Auto => unreachable!(),
    };
    times.total = start.elapsed();
    Ok(SpgemmReport { matrix, algorithm, flop: profile.total, times, collision_factor })
}

fn resolve_auto(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    partition: &RowPartition,
    cfg: &SpgemmConfig,
) -> Result<Algorithm> {
    let heap_ok = a.is_sorted() && b.is_sorted();
    if let Some(query) = &cfg.recipe {
        let entry = select_algorithm(query)?;
        if entry.kernel == Algorithm::Heap && !heap_ok {
            log::warn!("recipe chose heap but inputs are unsorted; using hash");
            return Ok(Algorithm::Hash);
        }
        return Ok(entry.kernel);
    }
    let est: CostEstimate = estimate_cost_with(a, b, profile, partition, cfg.collision_factor, cfg.sort_output, cfg);
    log::debug!("cost estimate: heap {} hash {}", est.t_heap, est.t_hash);
    Ok(if heap_ok && est.t_heap < est.t_hash { Algorithm::Heap } else { Algorithm::Hash })
}

pub(crate) fn rpts_from_row_nnz(row_nnz: &[usize], nworkers: usize) -> Vec<usize> {
    let counts: Vec<u64> = row_nnz.iter().map(|&n| n as u64).collect();
    exclusive_scan(&counts, nworkers).into_iter().map(|x| x as usize).collect()
}

/// Upper bound on distinct keys of a row: its flop, capped by the output width.
#[inline]
fn row_bound(flop: u64, ncols: usize) -> usize {
    (flop as usize).min(ncols)
}

fn symbolic_with<Acc, F>(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    partition: &RowPartition,
    make: F,
) -> Vec<usize>
where
    Acc: RowAccumulator,
    F: Fn(usize) -> Acc + Sync,
{
    let ncols = b.ncols();
    let mut row_nnz = vec![0usize; a.nrows()];
    let ranges: Vec<_> = partition.ranges().collect();
    let pieces = split_lengths(&mut row_nnz, ranges.iter().map(|r| r.len()));
    let work = |rows: std::ops::Range<usize>, out: &mut [usize]| {
        let mut acc = make(row_bound(profile.max_row_in(rows.clone()), ncols));
        for (i, slot) in rows.zip(out.iter_mut()) {
            acc.begin_row(row_bound(profile.per_row[i], ncols));
            let (acols, _) = a.row(i);
            for &k in acols {
                for &j in b.row(k as usize).0 {
                    acc.insert_symbolic(j);
                }
            }
            *slot = acc.finish_symbolic();
        }
    };
    if ranges.len() == 1 {
        work(ranges[0].clone(), pieces.into_iter().next().unwrap());
    } else {
        std::thread::scope(|s| {
            for (piece, r) in pieces.into_iter().zip(ranges) {
                let work = &work;
                s.spawn(move || work(r, piece));
            }
        });
    }
    row_nnz
}

/// Counts `nnz(c_i*)` for every row with a hash accumulator. `algorithm`
/// picks the scalar or chunked table; anything else uses the scalar one.
pub fn symbolic_phase(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    partition: &RowPartition,
    algorithm: Algorithm,
    cfg: &SpgemmConfig,
) -> Vec<usize> {
    let h = cfg.hash_multiplier;
    match (algorithm, cfg.chunk_width) {
        (Algorithm::HashChunked, 4) => symbolic_with(a, b, profile, partition, |n| ChunkedHashAccumulator::<4>::with_multiplier(n, h)),
        (Algorithm::HashChunked, 16) => symbolic_with(a, b, profile, partition, |n| ChunkedHashAccumulator::<16>::with_multiplier(n, h)),
        (Algorithm::HashChunked, _) => symbolic_with(a, b, profile, partition, |n| ChunkedHashAccumulator::<8>::with_multiplier(n, h)),
        _ => symbolic_with(a, b, profile, partition, |n| HashAccumulator::with_multiplier(n, h)),
    }
}

fn numeric_with<Acc, F>(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    rpts: &[usize],
    partition: &RowPartition,
    sort: bool,
    make: F,
) -> (Vec<u32>, Vec<f64>, f64)
where
    Acc: RowAccumulator,
    F: Fn(usize) -> Acc + Sync,
{
    let ncols = b.ncols();
    let nnz = *rpts.last().unwrap();
    let mut cols = vec![0u32; nnz];
    let mut vals = vec![0.0f64; nnz];
    let ranges: Vec<_> = partition.ranges().collect();
    let lens: Vec<usize> = ranges.iter().map(|r| rpts[r.end] - rpts[r.start]).collect();
    let col_pieces = split_lengths(&mut cols, lens.iter().copied());
    let val_pieces = split_lengths(&mut vals, lens.iter().copied());

    let work = |rows: std::ops::Range<usize>, out_c: &mut [u32], out_v: &mut [f64]| -> (u64, u64) {
        let mut acc = make(row_bound(profile.max_row_in(rows.clone()), ncols));
        let base = rpts[rows.start];
        for i in rows {
            acc.begin_row(row_bound(profile.per_row[i], ncols));
            let (acols, avals) = a.row(i);
            for (&k, &av) in acols.iter().zip(avals) {
                let (bcols, bvals) = b.row(k as usize);
                for (&j, &bv) in bcols.iter().zip(bvals) {
                    acc.accumulate(j, av * bv);
                }
            }
            let (lo, hi) = (rpts[i] - base, rpts[i + 1] - base);
            let written = acc.extract_into(&mut out_c[lo..hi], &mut out_v[lo..hi], sort);
            assert_eq!(written, hi - lo, "row {i}: numeric pass produced {written} entries, symbolic pass {}", hi - lo);
        }
        (acc.probes(), acc.accesses())
    };

    let stats: Vec<(u64, u64)> = if ranges.len() == 1 {
        let c = col_pieces.into_iter().next().unwrap();
        let v = val_pieces.into_iter().next().unwrap();
        vec![work(ranges[0].clone(), c, v)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = col_pieces
                .into_iter()
                .zip(val_pieces)
                .zip(ranges)
                .map(|((c, v), r)| {
                    let work = &work;
                    s.spawn(move || work(r, c, v))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("numeric worker panicked")).collect()
        })
    };
    let (probes, accesses) = stats.iter().fold((0, 0), |(p, q), &(x, y)| (p + x, q + y));
    let c = if accesses == 0 { 1.0 } else { probes as f64 / accesses as f64 };
    (cols, vals, c)
}

fn numeric_dispatch(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    rpts: &[usize],
    partition: &RowPartition,
    algorithm: Algorithm,
    cfg: &SpgemmConfig,
) -> (Vec<u32>, Vec<f64>, f64) {
    let (h, s) = (cfg.hash_multiplier, cfg.sort_output);
    match (algorithm, cfg.chunk_width) {
        (Algorithm::HashChunked, 4) => numeric_with(a, b, profile, rpts, partition, s, |n| ChunkedHashAccumulator::<4>::with_multiplier(n, h)),
        (Algorithm::HashChunked, 16) => numeric_with(a, b, profile, rpts, partition, s, |n| ChunkedHashAccumulator::<16>::with_multiplier(n, h)),
        (Algorithm::HashChunked, _) => numeric_with(a, b, profile, rpts, partition, s, |n| ChunkedHashAccumulator::<8>::with_multiplier(n, h)),
        _ => numeric_with(a, b, profile, rpts, partition, s, |n| HashAccumulator::with_multiplier(n, h)),
    }
}

/// Fills the column and value arrays for the row layout `rpts` produced by
/// [`symbolic_phase`]. Panics if any row's entry count differs from `rpts`.
pub fn numeric_phase(
    a: &CsrMatrix,
    b: &CsrMatrix,
    profile: &FlopProfile,
    rpts: &[usize],
    partition: &RowPartition,
    cfg: &SpgemmConfig,
) -> (Vec<u32>, Vec<f64>) {
    let algorithm = if cfg.algorithm == Algorithm::HashChunked { Algorithm::HashChunked } else { Algorithm::Hash };
    let (c, v, _) = numeric_dispatch(a, b, profile, rpts, partition, algorithm, cfg);
    (c, v)
}

/// One-pass heap kernel. Inputs must be row-sorted; output is sorted.
fn heap_spgemm(a: &CsrMatrix, b: &CsrMatrix, profile: &FlopProfile, partition: &RowPartition) -> CsrMatrix {
    let ranges: Vec<_> = partition.ranges().collect();
    // each worker stages its rows in buffers sized by its own flop bound
    let staged: Vec<(Vec<usize>, Vec<u32>, Vec<f64>)> = fork_join(&ranges, |_, rows| {
        let max_a = rows.clone().map(|i| a.row_nnz(i)).max().unwrap_or(0);
        let cap = profile.range_flop(rows.clone()) as usize;
        let mut acc = HeapAccumulator::new(max_a);
        let mut sizes = Vec::with_capacity(rows.len());
        let mut cols = Vec::with_capacity(cap);
        let mut vals = Vec::with_capacity(cap);
        for i in rows {
            let (ac, av) = a.row(i);
            sizes.push(acc.merge_row(ac, av, b, &mut cols, &mut vals));
        }
        (sizes, cols, vals)
    });

    let row_nnz: Vec<usize> = staged.iter().flat_map(|s| s.0.iter().copied()).collect();
    let rpts = rpts_from_row_nnz(&row_nnz, ranges.len());
    let nnz = *rpts.last().unwrap();
    let mut cols = vec![0u32; nnz];
    let mut vals = vec![0.0f64; nnz];
    {
        let lens: Vec<usize> = staged.iter().map(|s| s.1.len()).collect();
        let cp = split_lengths(&mut cols, lens.iter().copied());
        let vp = split_lengths(&mut vals, lens.iter().copied());
        if staged.len() == 1 {
            for ((c, v), s) in cp.into_iter().zip(vp).zip(&staged) {
                c.copy_from_slice(&s.1);
                v.copy_from_slice(&s.2);
            }
        } else {
            std::thread::scope(|sc| {
                for ((c, v), s) in cp.into_iter().zip(vp).zip(&staged) {
                    sc.spawn(move || {
                        c.copy_from_slice(&s.1);
                        v.copy_from_slice(&s.2);
                    });
                }
            });
        }
    }
    CsrMatrix::from_parts(a.nrows(), b.ncols(), rpts, cols, vals, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmat::{er_spec, g500_spec, generate};

    fn worked() -> (CsrMatrix, CsrMatrix) {
        (
            CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![2.0, 3.0]]).unwrap(),
            CsrMatrix::from_dense(&[vec![0.0, 4.0], vec![5.0, 0.0]]).unwrap(),
        )
    }

    fn all_configs() -> Vec<SpgemmConfig> {
        let mut v = vec![SpgemmConfig::new(Algorithm::Heap), SpgemmConfig::new(Algorithm::Reference), SpgemmConfig::new(Algorithm::Hash)];
        for w in [4, 8, 16] {
            v.push(SpgemmConfig::new(Algorithm::HashChunked).chunk_width(w));
        }
        v
    }

    #[test]
    fn worked_product_hash_sorted() {
        let (a, b) = worked();
        let c = spgemm(&a, &b, &SpgemmConfig::new(Algorithm::Hash).workers(2)).unwrap();
        assert_eq!(c.rpts(), &[0, 1, 3]);
        assert_eq!(c.cols(), &[1, 0, 1]);
        assert_eq!(c.vals(), &[4.0, 15.0, 8.0]);
        assert!(c.is_sorted());
    }

    #[test]
    fn worked_symbolic_counts() {
        let (a, b) = worked();
        let cfg = SpgemmConfig::new(Algorithm::Hash).workers(1);
        let p = count_flop_with_workers(&a, &b, 1).unwrap();
        let part = rows_to_workers(&p, 1);
        assert_eq!(symbolic_phase(&a, &b, &p, &part, Algorithm::Hash, &cfg), vec![1, 2]);
        let rpts = rpts_from_row_nnz(&[1, 2], 1);
        let (cols, vals) = numeric_phase(&a, &b, &p, &rpts, &part, &cfg);
        assert_eq!(cols, vec![1, 0, 1]);
        assert_eq!(vals, vec![4.0, 15.0, 8.0]);
    }

    #[test]
    fn empty_rows_have_zero_nnz() {
        let a = CsrMatrix::from_triples(3, 2, &[(1, 0, 1.0)], Default::default()).unwrap();
        let b = CsrMatrix::from_dense(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let cfg = SpgemmConfig::new(Algorithm::Hash).workers(2);
        let p = count_flop_with_workers(&a, &b, 1).unwrap();
        let part = rows_to_workers(&p, 2);
        assert_eq!(symbolic_phase(&a, &b, &p, &part, Algorithm::Hash, &cfg), vec![0, 2, 0]);
    }

    #[test]
    fn identity_times_b() {
        let b = generate(&g500_spec(5, 4, 9)).unwrap();
        let id = CsrMatrix::identity(32);
        for cfg in all_configs() {
            let c = spgemm(&id, &b, &cfg.clone().workers(3)).unwrap();
            assert!(c.bit_identical(&b), "{:?}", cfg.algorithm);
        }
    }

    #[test]
    fn kernels_agree_with_reference() {
        let a = generate(&g500_spec(10, 16, 7)).unwrap();
        let r = reference_spgemm(&a, &a).unwrap();
        for cfg in all_configs() {
            let c = spgemm(&a, &a, &cfg.clone().workers(4)).unwrap();
            assert!(c.same_pattern(&r), "{:?}", cfg.algorithm);
            assert_eq!(c.nnz(), r.nnz());
            assert!(c.max_relative_error(&r).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn heap_rejects_unsorted_input() {
        let a = generate(&er_spec(4, 4, 1)).unwrap();
        let perm: Vec<u32> = (0..16).rev().collect();
        let p = a.permute_columns(&perm).unwrap();
        let e = spgemm(&p, &a, &SpgemmConfig::new(Algorithm::Heap)).unwrap_err();
        assert!(matches!(e, SpgemmError::UnsortedInput));
        // hash kernels accept any order
        let c = spgemm(&p, &a, &SpgemmConfig::new(Algorithm::Hash)).unwrap();
        assert!(c.same_pattern(&reference_spgemm(&p, &a).unwrap()));
    }

    #[test]
    fn unsorted_output_sorts_to_sorted_output() {
        let a = generate(&g500_spec(8, 8, 3)).unwrap();
        for alg in [Algorithm::Hash, Algorithm::HashChunked] {
            let s = spgemm(&a, &a, &SpgemmConfig::new(alg).workers(2)).unwrap();
            let u = spgemm(&a, &a, &SpgemmConfig::new(alg).workers(2).sorted(false)).unwrap();
            assert!(!u.is_sorted());
            assert!(u.sort_rows().bit_identical(&s));
        }
    }

    #[test]
    fn dimension_mismatch_and_bad_config() {
        let a = CsrMatrix::identity(2);
        let b = CsrMatrix::identity(3);
        assert!(matches!(spgemm(&a, &b, &SpgemmConfig::default()), Err(SpgemmError::DimensionMismatch { .. })));
        assert!(spgemm(&a, &a, &SpgemmConfig::new(Algorithm::HashChunked).chunk_width(5)).is_err());
        assert!(spgemm(&a, &a, &SpgemmConfig::new(Algorithm::Hash).workers(0)).is_err());
    }

    #[test]
    fn auto_resolves_to_a_kernel() {
        let a = generate(&g500_spec(8, 16, 1)).unwrap();
        let r = spgemm_with_report(&a, &a, &SpgemmConfig::new(Algorithm::Auto).workers(2)).unwrap();
        assert!(matches!(r.algorithm, Algorithm::Hash | Algorithm::Heap));
        assert!(r.matrix.same_pattern(&reference_spgemm(&a, &a).unwrap()));
    }

    #[test]
    fn report_carries_flop_and_collision_factor() {
        let a = generate(&er_spec(8, 8, 1)).unwrap();
        let r = spgemm_with_report(&a, &a, &SpgemmConfig::new(Algorithm::Hash).workers(2)).unwrap();
        assert_eq!(r.flop, count_flop_with_workers(&a, &a, 1).unwrap().total);
        assert!(r.collision_factor.unwrap() >= 1.0);
        assert!(r.times.total >= r.times.numeric);
    }
}
