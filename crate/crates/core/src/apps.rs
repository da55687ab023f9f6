//! Application drivers: squaring, square x tall-skinny, and triangle
//! counting through `L * U`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::csr::{CooTriple, CsrMatrix, Duplicates};
use crate::engine::{spgemm, spgemm_with_report, SpgemmConfig, SpgemmReport};
use crate::error::{Result, SpgemmError};

pub fn square(a: &CsrMatrix, cfg: &SpgemmConfig) -> Result<CsrMatrix> {
    if !a.is_square() {
        return Err(SpgemmError::InvalidArgument(format!("{}x{} matrix is not square", a.nrows(), a.ncols())));
    }
    spgemm(a, a, cfg)
}

/// Builds an `n x k` matrix from `k` distinct columns of `a`, drawn
/// uniformly without replacement. Column `t` of the result is column
/// `selected[t]` of `a`, values included.
pub fn make_tall_skinny(a: &CsrMatrix, k: usize, seed: u64) -> Result<CsrMatrix> {
    let n = a.ncols();
    if k == 0 || k > n {
        return Err(SpgemmError::InvalidArgument(format!("cannot select {k} of {n} columns")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let selected = rand::seq::index::sample(&mut rng, n, k).into_vec();
    select_columns(a, &selected)
}

/// Keeps the listed columns of `a` in the given order.
pub fn select_columns(a: &CsrMatrix, selected: &[usize]) -> Result<CsrMatrix> {
    let mut new_index = vec![u32::MAX; a.ncols()];
    for (t, &j) in selected.iter().enumerate() {
        if j >= a.ncols() || new_index[j] != u32::MAX {
            return Err(SpgemmError::InvalidArgument(format!("bad or repeated column {j}")));
        }
        new_index[j] = t as u32;
    }
    let mut triples = Vec::new();
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            let t = new_index[c as usize];
            if t != u32::MAX {
                triples.push(CooTriple::new(i, t as usize, v));
            }
        }
    }
    CsrMatrix::from_triples(a.nrows(), selected.len(), &triples, Duplicates::Sum)
}

/// Undirected simple graph from any square pattern: `A + A^T` with unit
/// values and no diagonal.
pub fn symmetrize_pattern(a: &CsrMatrix) -> Result<CsrMatrix> {
    if !a.is_square() {
        return Err(SpgemmError::InvalidArgument("adjacency matrix must be square".into()));
    }
    let triples: Vec<CooTriple> = a
        .to_triples()
        .into_iter()
        .filter(|t| t.row != t.col)
        .flat_map(|t| [CooTriple::new(t.row, t.col, 1.0), CooTriple::new(t.col, t.row, 1.0)])
        .collect();
    CsrMatrix::from_triples(a.nrows(), a.ncols(), &triples, Duplicates::KeepFirst)
}

#[derive(Clone, Debug)]
pub struct TriangleDecomposition {
    /// `reorder[v]` is the new label of vertex `v`.
    pub reorder: Vec<u32>,
    /// Strictly lower part of the relabeled adjacency, unit values.
    pub lower: CsrMatrix,
    /// Strictly upper part of the relabeled adjacency, unit values.
    pub upper: CsrMatrix,
    pub reordered: CsrMatrix,
}

/// Relabels vertices by ascending degree (ties by original index) and
/// splits the adjacency into strict lower and upper triangles. Diagonal
/// entries are dropped with a warning.
pub fn triangle_decompose(a: &CsrMatrix) -> Result<TriangleDecomposition> {
    if !a.is_square() {
        return Err(SpgemmError::InvalidArgument("adjacency matrix must be square".into()));
    }
    let n = a.nrows();
    let mut triples: Vec<CooTriple> = a.to_triples();
    let before = triples.len();
    triples.retain(|t| t.row != t.col);
    if triples.len() != before {
        log::warn!("dropped {} diagonal entries from the adjacency matrix", before - triples.len());
    }
    for t in &mut triples {
        t.val = 1.0;
    }
    let pattern = CsrMatrix::from_triples(n, n, &triples, Duplicates::KeepFirst)?;

    let transposed = pattern.transpose();
    if transposed.cols() != pattern.cols() || transposed.rpts() != pattern.rpts() {
        for i in 0..n {
            let mirror = transposed.row(i).0;
            if let Some(&j) = pattern.row(i).0.iter().find(|j| mirror.binary_search(j).is_err()) {
                return Err(SpgemmError::NotSymmetric { row: i, col: j as usize });
            }
        }
        return Err(SpgemmError::NotSymmetric { row: 0, col: 0 });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (pattern.row_nnz(v), v));
    let mut reorder = vec![0u32; n];
    for (new, &old) in order.iter().enumerate() {
        reorder[old] = new as u32;
    }
    let reordered = pattern.permute_symmetric(&reorder)?;

    let (mut lo, mut up) = (Vec::new(), Vec::new());
    for t in reordered.to_triples() {
        if t.col < t.row {
            lo.push(t);
        } else {
            up.push(t);
        }
    }
    Ok(TriangleDecomposition {
        reorder,
        lower: CsrMatrix::from_triples(n, n, &lo, Duplicates::Sum)?,
        upper: CsrMatrix::from_triples(n, n, &up, Duplicates::Sum)?,
        reordered,
    })
}

/// Number of triangles: half the sum of `(L * U)(i, j)` over the edges
/// `(i, j)` of the relabeled graph.
pub fn count_triangles(d: &TriangleDecomposition, cfg: &SpgemmConfig) -> Result<u64> {
    count_triangles_with_report(d, cfg).map(|r| r.0)
}

pub fn count_triangles_with_report(d: &TriangleDecomposition, cfg: &SpgemmConfig) -> Result<(u64, SpgemmReport)> {
    let report = spgemm_with_report(&d.lower, &d.upper, cfg)?;
    let wedges = &report.matrix;
    let a = &d.reordered;
    let mut mark = vec![usize::MAX; a.ncols()];
    let mut sum = 0.0f64;
    for i in 0..a.nrows() {
        for &j in a.row(i).0 {
            mark[j as usize] = i;
        }
        let (wc, wv) = wedges.row(i);
        for (&j, &w) in wc.iter().zip(wv) {
            if mark[j as usize] == i {
                sum += w;
            }
        }
    }
    let half = sum / 2.0;
    if half.fract() != 0.0 || half < 0.0 {
        return Err(SpgemmError::Verification(format!("masked wedge sum {sum} is not an even integer")));
    }
    Ok((half as u64, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Algorithm;
    use crate::reference::reference_spgemm;
    use crate::rmat::{er_spec, generate};

    fn graph(n: usize, edges: &[(usize, usize)]) -> CsrMatrix {
        let t: Vec<CooTriple> =
            edges.iter().flat_map(|&(u, v)| [CooTriple::new(u, v, 1.0), CooTriple::new(v, u, 1.0)]).collect();
        CsrMatrix::from_triples(n, n, &t, Duplicates::KeepFirst).unwrap()
    }

    #[test]
    fn square_identity_and_rejects_rectangular() {
        let i = CsrMatrix::identity(5);
        assert!(square(&i, &SpgemmConfig::default()).unwrap().bit_identical(&i));
        assert!(square(&CsrMatrix::zeros(2, 3), &SpgemmConfig::default()).is_err());
    }

    #[test]
    fn square_er_matches_reference() {
        let a = generate(&er_spec(8, 8, 12)).unwrap();
        let c = square(&a, &SpgemmConfig::new(Algorithm::Heap).workers(2)).unwrap();
        assert!(c.bit_identical(&reference_spgemm(&a, &a).unwrap()));
    }

    #[test]
    fn tall_skinny_shapes() {
        let a = generate(&er_spec(6, 4, 1)).unwrap();
        let b = make_tall_skinny(&a, 1, 3).unwrap();
        assert_eq!((b.nrows(), b.ncols()), (64, 1));
        let at = a.transpose();
        let picked = (0..64).find(|&j| {
            let col = select_columns(&a, &[j]).unwrap();
            col.bit_identical(&b)
        });
        let j = picked.expect("column comes from A");
        assert_eq!(b.nnz(), at.row_nnz(j));

        let full = make_tall_skinny(&a, 64, 9).unwrap();
        assert_eq!(full.nnz(), a.nnz());
        assert!(make_tall_skinny(&a, 65, 0).is_err());
        assert!(make_tall_skinny(&a, 0, 0).is_err());
        assert!(make_tall_skinny(&a, 8, 5).unwrap().bit_identical(&make_tall_skinny(&a, 8, 5).unwrap()));
    }

    #[test]
    fn full_selection_in_order_is_identity() {
        let a = generate(&er_spec(5, 4, 2)).unwrap();
        let all: Vec<usize> = (0..32).collect();
        assert!(select_columns(&a, &all).unwrap().bit_identical(&a));
    }

    #[test]
    fn triangle_graph() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let d = triangle_decompose(&k3).unwrap();
        assert_eq!(d.reorder, vec![0, 1, 2]);
        assert_eq!(d.lower.to_triples().iter().map(|t| (t.row, t.col)).collect::<Vec<_>>(), vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!(count_triangles(&d, &SpgemmConfig::default()).unwrap(), 1);
    }

    #[test]
    fn star_has_hub_last_and_no_triangles() {
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let d = triangle_decompose(&star).unwrap();
        assert_eq!(d.reorder[0], 3);
        assert_eq!(count_triangles(&d, &SpgemmConfig::new(Algorithm::Heap)).unwrap(), 0);
    }

    #[test]
    fn empty_graph() {
        let d = triangle_decompose(&CsrMatrix::zeros(5, 5)).unwrap();
        assert_eq!((d.lower.nnz(), d.upper.nnz()), (0, 0));
        assert_eq!(count_triangles(&d, &SpgemmConfig::default()).unwrap(), 0);
    }

    #[test]
    fn diagonal_dropped_and_asymmetry_rejected() {
        let mut t = graph(3, &[(0, 1), (1, 2), (0, 2)]).to_triples();
        t.push(CooTriple::new(1, 1, 1.0));
        let a = CsrMatrix::from_triples(3, 3, &t, Duplicates::Sum).unwrap();
        let d = triangle_decompose(&a).unwrap();
        assert_eq!(d.reordered.nnz(), 6);

        let asym = CsrMatrix::from_triples(3, 3, &[(0, 1, 1.0)], Duplicates::Sum).unwrap();
        assert!(matches!(triangle_decompose(&asym), Err(SpgemmError::NotSymmetric { row: 0, col: 1 })));
    }

    #[test]
    fn halves_of_simple_graph() {
        let a = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        let d = triangle_decompose(&a).unwrap();
        assert_eq!(d.lower.nnz(), a.nnz() / 2);
        assert_eq!(d.upper.nnz(), a.nnz() / 2);
        assert!(d.lower.to_triples().iter().all(|t| t.col < t.row));
        assert!(d.upper.to_triples().iter().all(|t| t.col > t.row));
    }
}
