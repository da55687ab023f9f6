//! Compressed sparse row storage.
//!
//! A [`CsrMatrix`] keeps three arrays: `rpts` (length `nrows + 1`), `cols`
//! and `vals` (length `nnz`). Row `i` occupies `rpts[i]..rpts[i + 1]`.
//! Column indices within a row are unique; the `sorted` flag records whether
//! they are also ascending. Kernels that need ordered rows (the heap kernel)
//! check the flag instead of rescanning.

use crate::error::{Result, SpgemmError};
use crate::MAX_DIM;

/// One coordinate-format entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CooTriple {
    pub row: usize,
    pub col: usize,
    pub val: f64,
}

impl CooTriple {
    pub fn new(row: usize, col: usize, val: f64) -> Self {
        Self { row, col, val }
    }
}

impl From<(usize, usize, f64)> for CooTriple {
    fn from((row, col, val): (usize, usize, f64)) -> Self {
        Self { row, col, val }
    }
}

/// How repeated `(row, col)` coordinates are folded during construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Duplicates {
    #[default]
    Sum,
    /// Keep the first occurrence; used for pattern (graph) matrices.
    KeepFirst,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    rpts: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    sorted: bool,
}

fn check_dims(nrows: usize, ncols: usize) -> Result<()> {
    for d in [nrows, ncols] {
        if d > MAX_DIM {
            return Err(SpgemmError::DimensionTooLarge(d));
        }
    }
    Ok(())
}

impl CsrMatrix {
    /// Builds a matrix from raw arrays, validating every structural invariant.
    /// When `sorted` is true the rows must be strictly increasing.
    pub fn from_raw(
        nrows: usize,
        ncols: usize,
        rpts: Vec<usize>,
        cols: Vec<u32>,
        vals: Vec<f64>,
        sorted: bool,
    ) -> Result<Self> {
        check_dims(nrows, ncols)?;
        let bad = |msg: String| Err(SpgemmError::InvalidStructure(msg));
        if rpts.len() != nrows + 1 {
            return bad(format!("rpts has length {}, expected {}", rpts.len(), nrows + 1));
        }
        if rpts[0] != 0 {
            return bad("rpts[0] must be 0".into());
        }
        if rpts[nrows] != cols.len() || cols.len() != vals.len() {
            return bad(format!(
                "rpts[nrows] = {}, cols.len() = {}, vals.len() = {}",
                rpts[nrows],
                cols.len(),
                vals.len()
            ));
        }
        let mut seen = vec![usize::MAX; ncols];
        for i in 0..nrows {
            if rpts[i] > rpts[i + 1] {
                return bad(format!("rpts decreases at row {i}"));
            }
            let row = &cols[rpts[i]..rpts[i + 1]];
            for (p, &c) in row.iter().enumerate() {
                let c = c as usize;
                if c >= ncols {
                    return Err(SpgemmError::IndexOutOfRange { row: i, col: c, nrows, ncols });
                }
                if seen[c] == i {
                    return bad(format!("duplicate column {c} in row {i}"));
                }
                seen[c] = i;
                if sorted && p > 0 && row[p - 1] as usize >= c {
                    return bad(format!("row {i} is flagged sorted but is not increasing"));
                }
            }
        }
        Ok(Self { nrows, ncols, rpts, cols, vals, sorted })
    }

    /// Internal constructor for kernels that produce valid output by construction.
    pub(crate) fn from_parts(
        nrows: usize,
        ncols: usize,
        rpts: Vec<usize>,
        cols: Vec<u32>,
        vals: Vec<f64>,
        sorted: bool,
    ) -> Self {
        debug_assert_eq!(rpts.len(), nrows + 1);
        debug_assert_eq!(rpts[nrows], cols.len());
        debug_assert_eq!(cols.len(), vals.len());
        Self { nrows, ncols, rpts, cols, vals, sorted }
    }

    /// Builds a row-sorted matrix from coordinate triples.
    pub fn from_triples<T>(nrows: usize, ncols: usize, triples: &[T], dups: Duplicates) -> Result<Self>
    where
        T: Copy + Into<CooTriple>,
    {
        check_dims(nrows, ncols)?;
        let mut counts = vec![0usize; nrows + 1];
        for &t in triples {
            let t: CooTriple = t.into();
            if t.row >= nrows || t.col >= ncols {
                return Err(SpgemmError::IndexOutOfRange { row: t.row, col: t.col, nrows, ncols });
            }
            counts[t.row + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        // bucket by row, preserving input order inside each row
        let mut next = counts.clone();
        let mut entries = vec![(0u32, 0.0f64); triples.len()];
        for &t in triples {
            let t: CooTriple = t.into();
            entries[next[t.row]] = (t.col as u32, t.val);
            next[t.row] += 1;
        }

        let mut rpts = Vec::with_capacity(nrows + 1);
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals = Vec::with_capacity(entries.len());
        rpts.push(0);
        for i in 0..nrows {
            let row = &mut entries[counts[i]..counts[i + 1]];
            row.sort_by_key(|e| e.0);
            let start = cols.len();
            for &(c, v) in row.iter() {
                if cols.len() > start && *cols.last().unwrap() == c {
                    if dups == Duplicates::Sum {
                        *vals.last_mut().unwrap() += v;
                    }
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            rpts.push(cols.len());
        }
        Ok(Self { nrows, ncols, rpts, cols, vals, sorted: true })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            rpts: (0..=n).collect(),
            cols: (0..n as u32).collect(),
            vals: vec![1.0; n],
            sorted: true,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rpts: vec![0; nrows + 1], cols: vec![], vals: vec![], sorted: true }
    }

    /// Dense row-major input; exact zeros are not stored.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut triples = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(SpgemmError::InvalidArgument("ragged dense input".into()));
            }
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    triples.push(CooTriple::new(i, j, v));
                }
            }
        }
        Self::from_triples(nrows, ncols, &triples, Duplicates::Sum)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c as usize] = v;
            }
        }
        d
    }

    pub fn to_triples(&self) -> Vec<CooTriple> {
        (0..self.nrows)
            .flat_map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(move |(&c, &v)| CooTriple::new(i, c as usize, v))
            })
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn rpts(&self) -> &[usize] {
        &self.rpts
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn vals(&self) -> &[f64] {
        &self.vals
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let r = self.rpts[i]..self.rpts[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    #[inline]
    pub fn row_nnz(&self, i: usize) -> usize {
        self.rpts[i + 1] - self.rpts[i]
    }

    pub fn max_row_nnz(&self) -> usize {
        (0..self.nrows).map(|i| self.row_nnz(i)).max().unwrap_or(0)
    }

    /// Scans the rows and reports whether every row is strictly increasing,
    /// regardless of the stored flag.
    pub fn rows_are_increasing(&self) -> bool {
        (0..self.nrows).all(|i| self.row(i).0.windows(2).all(|w| w[0] < w[1]))
    }

    /// Relabels every stored column `j` as `perm[j]`. Row contents keep their
    /// storage order, so the result is flagged unsorted.
    pub fn permute_columns(&self, perm: &[u32]) -> Result<Self> {
        check_permutation(perm, self.ncols)?;
        let cols = self.cols.iter().map(|&c| perm[c as usize]).collect();
        Ok(Self {
            nrows: self.nrows,
            ncols: self.ncols,
            rpts: self.rpts.clone(),
            cols,
            vals: self.vals.clone(),
            sorted: false,
        })
    }

    /// Same matrix with the entries of every row stored in random order.
    pub fn shuffle_rows(&self, seed: u64) -> Self {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut cols = self.cols.clone();
        let mut vals = self.vals.clone();
        let mut order: Vec<usize> = Vec::new();
        for i in 0..self.nrows {
            let (lo, hi) = (self.rpts[i], self.rpts[i + 1]);
            order.clear();
            order.extend(lo..hi);
            order.shuffle(&mut rng);
            for (k, &src) in (lo..hi).zip(&order) {
                cols[k] = self.cols[src];
                vals[k] = self.vals[src];
            }
        }
        Self { nrows: self.nrows, ncols: self.ncols, rpts: self.rpts.clone(), cols, vals, sorted: false }
    }

    /// Applies `perm` to both rows and columns: entry `(i, j)` moves to
    /// `(perm[i], perm[j])`. The result is row-sorted.
    pub fn permute_symmetric(&self, perm: &[u32]) -> Result<Self> {
        if !self.is_square() {
            return Err(SpgemmError::InvalidArgument("symmetric permutation needs a square matrix".into()));
        }
        check_permutation(perm, self.nrows)?;
        let triples: Vec<CooTriple> = self
            .to_triples()
            .into_iter()
            .map(|t| CooTriple::new(perm[t.row] as usize, perm[t.col] as usize, t.val))
            .collect();
        Self::from_triples(self.nrows, self.ncols, &triples, Duplicates::Sum)
    }

    pub fn sort_rows(&self) -> Self {
        if self.sorted {
            return self.clone();
        }
        let mut cols = self.cols.clone();
        let mut vals = self.vals.clone();
        let mut scratch: Vec<(u32, f64)> = Vec::new();
        for i in 0..self.nrows {
            let r = self.rpts[i]..self.rpts[i + 1];
            if cols[r.clone()].windows(2).all(|w| w[0] < w[1]) {
                continue;
            }
            scratch.clear();
            scratch.extend(cols[r.clone()].iter().copied().zip(vals[r.clone()].iter().copied()));
            scratch.sort_unstable_by_key(|e| e.0);
            for (k, (c, v)) in r.zip(scratch.iter()) {
                cols[k] = *c;
                vals[k] = *v;
            }
        }
        Self { nrows: self.nrows, ncols: self.ncols, rpts: self.rpts.clone(), cols, vals, sorted: true }
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.cols {
            counts[c as usize + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut cols = vec![0u32; self.nnz()];
        let mut vals = vec![0.0; self.nnz()];
        for i in 0..self.nrows {
            let (rc, rv) = self.row(i);
            for (&c, &v) in rc.iter().zip(rv) {
                let dst = next[c as usize];
                cols[dst] = i as u32;
                vals[dst] = v;
                next[c as usize] += 1;
            }
        }
        // rows are visited in order, so every output row is increasing
        Self { nrows: self.ncols, ncols: self.nrows, rpts: counts, cols, vals, sorted: true }
    }

    /// True when both matrices have the same shape and the same stored
    /// coordinates per row, ignoring order inside rows and values.
    pub fn same_pattern(&self, other: &Self) -> bool {
        if self.nrows != other.nrows || self.ncols != other.ncols || self.rpts != other.rpts {
            return false;
        }
        let (a, b) = (self.sort_rows(), other.sort_rows());
        a.cols == b.cols
    }

    /// Largest relative difference `|x - y| / max(|x|, |y|)` over matching
    /// entries of two matrices with identical sorted pattern. `None` when the
    /// patterns differ.
    pub fn max_relative_error(&self, other: &Self) -> Option<f64> {
        if !self.same_pattern(other) {
            return None;
        }
        let (a, b) = (self.sort_rows(), other.sort_rows());
        let err = a
            .vals
            .iter()
            .zip(&b.vals)
            .map(|(&x, &y)| {
                let scale = x.abs().max(y.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (x - y).abs() / scale
                }
            })
            .fold(0.0, f64::max);
        Some(err)
    }

    /// Bitwise equality of all arrays and flags.
    pub fn bit_identical(&self, other: &Self) -> bool {
        self.nrows == other.nrows
            && self.ncols == other.ncols
            && self.sorted == other.sorted
            && self.rpts == other.rpts
            && self.cols == other.cols
            && self.vals.len() == other.vals.len()
            && self.vals.iter().zip(&other.vals).all(|(x, y)| x.to_bits() == y.to_bits())
    }
}

pub fn check_permutation(perm: &[u32], n: usize) -> Result<()> {
    let err = || SpgemmError::NotAPermutation { len: perm.len(), n };
    if perm.len() != n {
        return Err(err());
    }
    let mut hit = vec![false; n];
    for &p in perm {
        let p = p as usize;
        if p >= n || hit[p] {
            return Err(err());
        }
        hit[p] = true;
    }
    Ok(())
}

pub fn invert_permutation(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u32;
    }
    inv
}
