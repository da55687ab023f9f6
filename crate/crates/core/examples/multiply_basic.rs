//! Multiply two small matrices with every kernel and compare.

use spgemm::{reference_spgemm, spgemm, Algorithm, CsrMatrix, SpgemmConfig};

fn main() -> spgemm::Result<()> {
    let a = CsrMatrix::from_dense(&[vec![1.0, 2.0, 0.0], vec![0.0, 3.0, 0.0], vec![4.0, 0.0, 5.0]])?;
    let b = CsrMatrix::from_dense(&[vec![0.0, 4.0, 1.0], vec![5.0, 0.0, 0.0], vec![0.0, 0.0, 2.0]])?;
    let expect = reference_spgemm(&a, &b)?;

    for alg in [Algorithm::Hash, Algorithm::HashChunked, Algorithm::Heap] {
        let c = spgemm(&a, &b, &SpgemmConfig::new(alg).workers(2))?;
        assert!(c.bit_identical(&expect));
        println!("{alg:>12}: {:?}", c.to_dense());
    }
    Ok(())
}
