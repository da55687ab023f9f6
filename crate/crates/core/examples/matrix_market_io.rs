//! Write a product to Matrix Market and read it back.

use spgemm::rmat::{er_spec, generate};
use spgemm::{read_matrix_market, spgemm, write_matrix_market, SpgemmConfig};

fn main() -> spgemm::Result<()> {
    let dir = std::env::temp_dir().join("spgemm-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("c.mtx");

    let a = generate(&er_spec(9, 8, 1))?;
    let c = spgemm(&a, &a, &SpgemmConfig::default())?;
    write_matrix_market(&path, &c)?;
    let back = read_matrix_market(&path)?;

    println!("{}: {} x {} with {} entries", path.display(), back.nrows(), back.ncols(), back.nnz());
    println!("max relative error after round trip: {:?}", back.max_relative_error(&c));
    Ok(())
}
