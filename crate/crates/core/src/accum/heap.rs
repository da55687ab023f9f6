use crate::csr::CsrMatrix;

/// One input stream: the remaining part of row `b_k*` scaled by `a_ik`.
/// `key` packs `(column << 32) | stream` so ties on column are broken by the
/// stream's position in `a_i*`, which fixes the summation order.
#[derive(Clone, Copy, Debug)]
struct Cursor {
    key: u64,
    pos: usize,
    end: usize,
}

impl Cursor {
    #[inline]
    fn col(&self) -> u32 {
        (self.key >> 32) as u32
    }

    #[inline]
    fn stream(&self) -> usize {
        (self.key & 0xffff_ffff) as usize
    }
}

#[inline]
fn make_key(col: u32, stream: usize) -> u64 {
    ((col as u64) << 32) | stream as u64
}

/// Binary min-heap merging the rows of B selected by one row of A.
/// Holds at most `nnz(a_i*)` cursors while building row `i`.
#[derive(Clone, Debug, Default)]
pub struct HeapAccumulator {
    heap: Vec<Cursor>,
}

impl HeapAccumulator {
    pub fn new(max_row_nnz: usize) -> Self {
        Self { heap: Vec::with_capacity(max_row_nnz) }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Merges `sum_k a_ik * b_k*` and appends the row to `out_cols`/`out_vals`
    /// in strictly ascending column order. Rows of `b` must be sorted.
    /// Returns the number of entries appended.
    pub fn merge_row(
        &mut self,
        a_cols: &[u32],
        a_vals: &[f64],
        b: &CsrMatrix,
        out_cols: &mut Vec<u32>,
        out_vals: &mut Vec<f64>,
    ) -> usize {
        debug_assert!(b.is_sorted());
        let b_rpts = b.rpts();
        let (b_cols, b_vals) = (b.cols(), b.vals());
        self.heap.clear();
        for (s, &k) in a_cols.iter().enumerate() {
            let (start, end) = (b_rpts[k as usize], b_rpts[k as usize + 1]);
            if start < end {
                self.heap.push(Cursor { key: make_key(b_cols[start], s), pos: start, end });
            }
        }
        for i in (0..self.heap.len() / 2).rev() {
            self.sift_down(i);
        }
        debug_assert!(self.is_heap());

        let first = out_cols.len();
        while let Some(top) = self.heap.first_mut() {
            let col = top.col();
            let v = a_vals[top.stream()] * b_vals[top.pos];
            if out_cols.len() > first && *out_cols.last().unwrap() == col {
                *out_vals.last_mut().unwrap() += v;
            } else {
                out_cols.push(col);
                out_vals.push(v);
            }
            top.pos += 1;
            if top.pos < top.end {
                top.key = make_key(b_cols[top.pos], top.stream());
                self.sift_down(0);
            } else {
                self.pop();
            }
        }
        out_cols.len() - first
    }

    /// Convenience form returning the merged row as pairs.
    pub fn build_row(&mut self, a_row: &[(u32, f64)], b: &CsrMatrix) -> Vec<(u32, f64)> {
        let (a_cols, a_vals): (Vec<u32>, Vec<f64>) = a_row.iter().copied().unzip();
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        self.merge_row(&a_cols, &a_vals, b, &mut cols, &mut vals);
        cols.into_iter().zip(vals).collect()
    }

    fn pop(&mut self) {
        let last = self.heap.pop().expect("pop on empty heap");
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.sift_down(0);
        }
    }

    #[inline]
    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        let item = self.heap[i];
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && self.heap[right].key < self.heap[left].key { right } else { left };
            if self.heap[child].key >= item.key {
                break;
            }
            self.heap[i] = self.heap[child];
            i = child;
        }
        self.heap[i] = item;
        #[cfg(debug_assertions)]
        self.check_local(i);
    }

    #[cfg(debug_assertions)]
    fn check_local(&self, i: usize) {
        let h = &self.heap;
        for c in [2 * i + 1, 2 * i + 2] {
            if c < h.len() {
                debug_assert!(h[i].key <= h[c].key, "heap order violated below {i}");
            }
        }
    }

    pub(crate) fn is_heap(&self) -> bool {
        (1..self.heap.len()).all(|i| self.heap[(i - 1) / 2].key <= self.heap[i].key)
    }
}
