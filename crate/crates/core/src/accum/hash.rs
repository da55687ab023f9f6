use super::{flush_scratch, home_slot, lowest_p2, RowAccumulator, DEFAULT_HASH_MULTIPLIER, EMPTY};

/// Open-addressing table with linear probing over individual slots.
#[derive(Clone, Debug)]
pub struct HashAccumulator {
    keys: Vec<u32>,
    vals: Vec<f64>,
    mask: usize,
    occupied: usize,
    multiplier: u64,
    probes: u64,
    accesses: u64,
    scratch: Vec<(u32, f64)>,
}

impl HashAccumulator {
    /// Allocates `lowest_p2(max_bound)` slots, enough for any row with at
    /// most `max_bound` distinct keys.
    pub fn new(max_bound: usize) -> Self {
        Self::with_multiplier(max_bound, DEFAULT_HASH_MULTIPLIER)
    }

    pub fn with_multiplier(max_bound: usize, multiplier: u64) -> Self {
        let capacity = lowest_p2(max_bound);
        Self {
            keys: vec![EMPTY; capacity],
            vals: vec![0.0; capacity],
            mask: capacity - 1,
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

    /// Size of the region used by the current row.
    pub fn active_size(&self) -> usize {
        self.mask + 1
    }

    pub fn home_slot(&self, key: u32) -> usize {
        home_slot(key, self.multiplier, self.mask)
    }

    /// Finds `key` or the free slot where it belongs. Returns the slot and
    /// whether the key was already there.
    #[inline]
    fn probe(&mut self, key: u32) -> (usize, bool) {
        debug_assert_ne!(key, EMPTY);
        self.accesses += 1;
        let mut slot = home_slot(key, self.multiplier, self.mask);
        let mut steps = 0usize;
        loop {
            self.probes += 1;
            let k = self.keys[slot];
            if k == key {
                return (slot, true);
            }
            if k == EMPTY {
                return (slot, false);
            }
            steps += 1;
            assert!(steps <= self.mask, "hash table full ({} slots)", self.mask + 1);
            slot = (slot + 1) & self.mask;
        }
    }

    fn clear_active(&mut self) {
        if self.occupied > 0 {
            self.keys[..=self.mask].fill(EMPTY);
            self.occupied = 0;
        }
    }
}

impl RowAccumulator for HashAccumulator {
    fn begin_row(&mut self, bound: usize) {
        debug_assert_eq!(self.occupied, 0);
        let size = lowest_p2(bound);
        assert!(size <= self.keys.len(), "row bound {bound} exceeds table capacity {}", self.keys.len());
        self.mask = size - 1;
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
            for slot in 0..=self.mask {
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

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn duplicate_detection() {
        let mut h = HashAccumulator::new(4);
        assert!(h.insert_symbolic(5));
        assert!(!h.insert_symbolic(5));
        assert_eq!(h.occupied(), 1);
    }

    #[test]
    fn colliding_keys_take_next_slot() {
        let mut h = HashAccumulator::new(15);
        assert_eq!(h.capacity(), 16);
        let first = 3u32;
        let home = h.home_slot(first);
        let second = (first + 1..1000).find(|&k| h.home_slot(k) == home).unwrap();

        h.insert_symbolic(first);
        let before = h.probes();
        h.insert_symbolic(second);
        assert_eq!(h.probes() - before, 2);
        assert_ne!(home, 15);
        // unsorted extraction walks slots in order: home, then home + 1
        let keys: Vec<u32> = h.extract(false).into_iter().map(|e| e.0).collect();
        assert_eq!(keys, vec![first, second]);
        assert!(h.collision_factor() > 1.0);
    }

    #[test]
    fn distinct_homes_give_unit_collision_factor() {
        let mut h = HashAccumulator::new(15);
        let mut used = std::collections::HashSet::new();
        for k in 0..200u32 {
            if used.insert(h.home_slot(k)) {
                h.insert_symbolic(k);
            }
        }
        assert_eq!(h.occupied(), 16.min(used.len()));
        assert_eq!(h.collision_factor(), 1.0);
    }

    #[test]
    fn counts_distinct_keys() {
        let mut h = HashAccumulator::new(100);
        for k in 0..100u32 {
            h.insert_symbolic(k * 37);
        }
        assert_eq!(h.occupied(), 100);
        assert_eq!(h.finish_symbolic(), 100);
        assert_eq!(h.occupied(), 0);
    }

    #[test]
    fn additive_fold_and_extract() {
        let mut h = HashAccumulator::new(8);
        h.accumulate(7, 2.0);
        h.accumulate(7, 3.0);
        assert_eq!(h.extract(true), vec![(7, 5.0)]);

        h.accumulate(1, 2.0);
        h.accumulate(3, 4.0);
        assert_eq!(h.extract(true), vec![(1, 2.0), (3, 4.0)]);

        assert!(h.extract(true).is_empty());
        h.accumulate(9, 1.0);
        h.accumulate(2, 3.0);
        assert_eq!(h.extract(true), vec![(2, 3.0), (9, 1.0)]);
    }

    #[test]
    fn random_sequences_match_map_fold() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut h = HashAccumulator::new(512);
        for _ in 0..50 {
            let len = rng.random_range(0..512);
            h.begin_row(len);
            let mut oracle: Vec<(u32, f64)> = Vec::new();
            for _ in 0..len {
                let k = rng.random_range(0..5000u32);
                let v = rng.random_range(-3..=3) as f64;
                h.accumulate(k, v);
                match oracle.iter_mut().find(|e| e.0 == k) {
                    Some(e) => e.1 += v,
                    None => oracle.push((k, v)),
                }
            }
            let unsorted = h.extract(false);
            let mut resorted = unsorted.clone();
            resorted.sort_by_key(|e| e.0);
            let expect: BTreeMap<u32, f64> = oracle.into_iter().collect();
            assert_eq!(resorted, expect.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn active_region_follows_row_bound() {
        let mut h = HashAccumulator::new(1000);
        assert_eq!(h.capacity(), 1024);
        h.begin_row(3);
        assert_eq!(h.active_size(), 4);
        for k in [10, 20, 30] {
            h.insert_symbolic(k);
        }
        assert_eq!(h.finish_symbolic(), 3);
        h.begin_row(1000);
        assert_eq!(h.active_size(), 1024);
    }

    #[test]
    #[should_panic(expected = "full")]
    fn overfull_table_panics() {
        let mut h = HashAccumulator::new(1);
        h.begin_row(1);
        for k in 0..3 {
            h.insert_symbolic(k);
        }
    }
}
