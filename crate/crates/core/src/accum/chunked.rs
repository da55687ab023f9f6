use super::{flush_scratch, home_slot, lowest_p2, RowAccumulator, DEFAULT_HASH_MULTIPLIER, EMPTY};

/// Hash table split into chunks of `W` consecutive slots. The hash selects a
/// chunk; all `W` keys of the chunk are compared at once, new keys fill the
/// chunk from its start, and a full chunk sends the probe to the next chunk.
///
/// Slots inside a chunk are never freed during a row, so a chunk with a free
/// slot cannot have overflowed: a miss there ends the search.
#[derive(Clone, Debug)]
pub struct ChunkedHashAccumulator<const W: usize = 8> {
    keys: Vec<u32>,
    vals: Vec<f64>,
    chunk_mask: usize,
    occupied: usize,
    multiplier: u64,
    probes: u64,
    accesses: u64,
    scratch: Vec<(u32, f64)>,
}

fn table_size<const W: usize>(bound: usize) -> usize {
    lowest_p2(bound).max(W)
}

impl<const W: usize> ChunkedHashAccumulator<W> {
    pub fn new(max_bound: usize) -> Self {
        Self::with_multiplier(max_bound, DEFAULT_HASH_MULTIPLIER)
    }

    pub fn with_multiplier(max_bound: usize, multiplier: u64) -> Self {
        const { assert!(W.is_power_of_two()) };
        let capacity = table_size::<W>(max_bound);
        Self {
            keys: vec![EMPTY; capacity],
            vals: vec![0.0; capacity],
            chunk_mask: capacity / W - 1,
            occupied: 0,
            multiplier,
            probes: 0,
            accesses: 0,
            scratch: Vec::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.keys.len()
    }

    pub fn chunk_width(&self) -> usize {
        W
    }

    pub fn active_size(&self) -> usize {
        (self.chunk_mask + 1) * W
    }

    pub fn home_chunk(&self, key: u32) -> usize {
        home_slot(key, self.multiplier, self.chunk_mask)
    }

    /// Slot holding `key`, if present.
    pub fn position_of(&self, key: u32) -> Option<usize> {
        self.keys[..self.active_size()].iter().position(|&k| k == key)
    }

    #[inline]
    fn probe(&mut self, key: u32) -> (usize, bool) {
        debug_assert_ne!(key, EMPTY);
        self.accesses += 1;
        let mut chunk = home_slot(key, self.multiplier, self.chunk_mask);
        let mut steps = 0usize;
        loop {
            self.probes += 1;
            let base = chunk * W;
            let slots: &[u32; W] = self.keys[base..base + W].try_into().unwrap();
            if let Some(p) = slots.iter().position(|&k| k == key) {
                return (base + p, true);
            }
            if let Some(p) = slots.iter().position(|&k| k == EMPTY) {
                return (base + p, false);
            }
            steps += 1;
            assert!(steps <= self.chunk_mask, "hash table full ({} slots)", self.active_size());
            chunk = (chunk + 1) & self.chunk_mask;
        }
    }

    fn clear_active(&mut self) {
        if self.occupied > 0 {
            let n = self.active_size();
            self.keys[..n].fill(EMPTY);
            self.occupied = 0;
        }
    }
}

impl<const W: usize> RowAccumulator for ChunkedHashAccumulator<W> {
    fn begin_row(&mut self, bound: usize) {
        debug_assert_eq!(self.occupied, 0);
        let size = table_size::<W>(bound);
        assert!(size <= self.keys.len(), "row bound {bound} exceeds table capacity {}", self.keys.len());
        self.chunk_mask = size / W - 1;
    }

    #[inline]
    fn insert_symbolic(&mut self, key: u32) -> bool {
        let (slot, found) = self.probe(key);
        if !found {
            self.keys[slot] = key;
            self.occupied += 1;
        }
        !found
    }

    #[inline]
    fn accumulate(&mut self, key: u32, val: f64) {
        let (slot, found) = self.probe(key);
        if found {
            self.vals[slot] += val;
        } else {
            self.keys[slot] = key;
            self.vals[slot] = val;
            self.occupied += 1;
        }
    }

    fn occupied(&self) -> usize {
        self.occupied
    }

    fn finish_symbolic(&mut self) -> usize {
        let n = self.occupied;
        self.clear_active();
        n
    }

    fn extract_into(&mut self, cols: &mut [u32], vals: &mut [f64], sort: bool) -> usize {
        let mut scratch = std::mem::take(&mut self.scratch);
        scratch.clear();
        if self.occupied > 0 {
            for slot in 0..self.active_size() {
                let k = self.keys[slot];
                if k != EMPTY {
                    scratch.push((k, self.vals[slot]));
                    self.keys[slot] = EMPTY;
                }
            }
        }
        self.occupied = 0;
        let n = flush_scratch(&mut scratch, cols, vals, sort);
        self.scratch = scratch;
        n
    }

    fn probes(&self) -> u64 {
        self.probes
    }

    fn accesses(&self) -> u64 {
        self.accesses
    }
}
