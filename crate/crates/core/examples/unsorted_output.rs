//! Skip the per-row sort and sort later only if needed.

use std::time::Instant;

use spgemm::rmat::{g500_spec, generate};
use spgemm::{spgemm, Algorithm, SpgemmConfig};

fn main() -> spgemm::Result<()> {
    let a = generate(&g500_spec(12, 16, 5))?;

    let t = Instant::now();
    let sorted = spgemm(&a, &a, &SpgemmConfig::new(Algorithm::Hash))?;
    let t_sorted = t.elapsed();

    let t = Instant::now();
    let unsorted = spgemm(&a, &a, &SpgemmConfig::new(Algorithm::Hash).sorted(false))?;
    let t_unsorted = t.elapsed();

    println!("sorted   {t_sorted:?}  rows increasing: {}", sorted.rows_are_increasing());
    println!("unsorted {t_unsorted:?}  rows increasing: {}", unsorted.rows_are_increasing());
    assert!(unsorted.sort_rows().bit_identical(&sorted));
    println!("after sort_rows the two products are bit-identical");
    Ok(())
}
