//! Single-threaded row-wise product with a dense sparse accumulator (SPA).
//! Used as ground truth for the parallel kernels.

use crate::csr::CsrMatrix;
use crate::error::{Result, SpgemmError};

pub(crate) fn check_conformant(a: &CsrMatrix, b: &CsrMatrix) -> Result<()> {
    if a.ncols() != b.nrows() {
        return Err(SpgemmError::DimensionMismatch {
            a_rows: a.nrows(),
            a_cols: a.ncols(),
            b_rows: b.nrows(),
            b_cols: b.ncols(),
        });
    }
    Ok(())
}

pub fn reference_spgemm(a: &CsrMatrix, b: &CsrMatrix) -> Result<CsrMatrix> {
    check_conformant(a, b)?;
    let n = b.ncols();
    let mut dense = vec![0.0f64; n];
    let mut marker = vec![usize::MAX; n];
    let mut touched: Vec<u32> = Vec::new();

    let mut rpts = Vec::with_capacity(a.nrows() + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    rpts.push(0);
    for i in 0..a.nrows() {
        touched.clear();
        let (acols, avals) = a.row(i);
        for (&k, &av) in acols.iter().zip(avals) {
            let (bcols, bvals) = b.row(k as usize);
            for (&j, &bv) in bcols.iter().zip(bvals) {
                let j = j as usize;
                if marker[j] != i {
                    marker[j] = i;
                    dense[j] = av * bv;
                    touched.push(j as u32);
                } else {
                    dense[j] += av * bv;
                }
            }
        }
        touched.sort_unstable();
        for &j in &touched {
            cols.push(j);
            vals.push(dense[j as usize]);
        }
        rpts.push(cols.len());
    }
    Ok(CsrMatrix::from_parts(a.nrows(), n, rpts, cols, vals, true))
}
