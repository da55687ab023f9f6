//! Generate ER and Graph500 matrices and compare their degree spread.

use spgemm::rmat::{er_spec, g500_spec, generate_with_workers};

fn main() -> spgemm::Result<()> {
    let (scale, ef, seed) = (12, 16, 42);
    for (name, spec) in [("ER", er_spec(scale, ef, seed)), ("G500", g500_spec(scale, ef, seed))] {
        let m = generate_with_workers(&spec, 4)?;
        let degrees: Vec<usize> = (0..m.nrows()).map(|i| m.row_nnz(i)).collect();
        let empty = degrees.iter().filter(|&&d| d == 0).count();
        println!(
            "{name:>5}: n={} nnz={} max row={} empty rows={empty}",
            m.nrows(),
            m.nnz(),
            degrees.iter().max().unwrap()
        );
    }
    Ok(())
}
