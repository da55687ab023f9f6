//! Per-worker row accumulators.
//!
//! Every worker owns one accumulator for the whole multiply and reuses it
//! row after row. Hash tables are allocated once for the worker's largest
//! row and then, per row, only a power-of-two prefix sized for that row is
//! used. Keeping the active size a function of the row alone makes the slot
//! layout (and therefore unsorted output order) independent of how rows were
//! distributed among workers.

mod chunked;
mod hash;
mod heap;

pub use chunked::ChunkedHashAccumulator;
pub use hash::HashAccumulator;
pub use heap::HeapAccumulator;

/// Knuth's multiplicative hashing constant.
pub const DEFAULT_HASH_MULTIPLIER: u64 = 2_654_435_761;

/// Marks a free slot. Column indices never reach this value because matrix
/// dimensions are capped at `2^31 - 1`.
pub const EMPTY: u32 = u32::MAX;

/// Smallest power of two strictly greater than `n`.
pub fn lowest_p2(n: usize) -> usize {
    (n + 1).next_power_of_two()
}

#[inline]
pub(crate) fn home_slot(key: u32, multiplier: u64, mask: usize) -> usize {
    (key as u64).wrapping_mul(multiplier) as usize & mask
}

/// Common interface of the hash-based accumulators used by the two-phase
/// kernels.
pub trait RowAccumulator: Send {
    /// Prepares for a row that will see at most `bound` distinct keys.
    fn begin_row(&mut self, bound: usize);

    /// Returns true when `key` was not yet present.
    fn insert_symbolic(&mut self, key: u32) -> bool;

    fn accumulate(&mut self, key: u32, val: f64);

    fn occupied(&self) -> usize;

    /// Clears the row and returns how many distinct keys it held.
    fn finish_symbolic(&mut self) -> usize;

    /// Moves the row's entries into `cols`/`vals` (optionally sorted by
    /// column), clears the row, and returns the entry count.
    fn extract_into(&mut self, cols: &mut [u32], vals: &mut [f64], sort: bool) -> usize;

    /// Slots (scalar) or chunks (chunked) touched so far.
    fn probes(&self) -> u64;

    /// Insert/accumulate calls so far.
    fn accesses(&self) -> u64;

    /// Average probes per access; 1.0 means no collision was ever seen.
    fn collision_factor(&self) -> f64 {
        if self.accesses() == 0 {
            1.0
        } else {
            self.probes() as f64 / self.accesses() as f64
        }
    }

    fn extract(&mut self, sort: bool) -> Vec<(u32, f64)> {
        let n = self.occupied();
        let mut cols = vec![0u32; n];
        let mut vals = vec![0.0; n];
        self.extract_into(&mut cols, &mut vals, sort);
        cols.into_iter().zip(vals).collect()
    }
}

/// Writes `(col, val)` pairs gathered in `scratch` into the output slices.
#[inline]
pub(crate) fn flush_scratch(scratch: &mut [(u32, f64)], cols: &mut [u32], vals: &mut [f64], sort: bool) -> usize {
    if sort {
        scratch.sort_unstable_by_key(|e| e.0);
    }
    let n = scratch.len();
    assert!(n <= cols.len() && n <= vals.len(), "row overflows its symbolic size ({n} > {})", cols.len());
    for (k, &(c, v)) in scratch.iter().enumerate() {
        cols[k] = c;
        vals[k] = v;
    }
    n
}
