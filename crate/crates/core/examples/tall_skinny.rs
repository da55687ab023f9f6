//! Multiply a square matrix by a tall-skinny matrix built from its columns.

use spgemm::apps::make_tall_skinny;
use spgemm::rmat::{g500_spec, generate};
use spgemm::{spgemm_with_report, Algorithm, SpgemmConfig};

fn main() -> spgemm::Result<()> {
    let a = generate(&g500_spec(12, 16, 9))?;
    for short in [2u32, 4, 6, 8] {
        let b = make_tall_skinny(&a, 1 << short, 11)?;
        for alg in [Algorithm::Hash, Algorithm::Heap] {
            let r = spgemm_with_report(&a, &b, &SpgemmConfig::new(alg))?;
            println!(
                "k=2^{short} {alg:>5}: flop {:>8} nnz(C) {:>7} {:?}",
                r.flop,
                r.matrix.nnz(),
                r.times.total
            );
        }
    }
    Ok(())
}
