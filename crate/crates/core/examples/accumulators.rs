//! Drive the three row accumulators directly on one output row.

use spgemm::accum::{ChunkedHashAccumulator, HashAccumulator, HeapAccumulator, RowAccumulator};
use spgemm::rmat::{g500_spec, generate};

fn run<A: RowAccumulator>(name: &str, acc: &mut A, products: &[(u32, f64)]) {
    acc.begin_row(products.len());
    for &(col, v) in products {
        acc.accumulate(col, v);
    }
    let row = acc.extract(true);
    println!("{name:>8}: {} entries, {} probes / {} accesses", row.len(), acc.probes(), acc.accesses());
}

fn main() -> spgemm::Result<()> {
    let b = generate(&g500_spec(10, 16, 3))?;
    let a_row: Vec<(u32, f64)> = (0..32u32).map(|k| (k * 7, 1.0 + k as f64)).collect();

    let mut products = Vec::new();
    for &(k, a) in &a_row {
        let (cols, vals) = b.row(k as usize);
        products.extend(cols.iter().zip(vals).map(|(&c, &v)| (c, a * v)));
    }

    run("hash", &mut HashAccumulator::new(products.len()), &products);
    run("chunk4", &mut ChunkedHashAccumulator::<4>::new(products.len()), &products);
    run("chunk16", &mut ChunkedHashAccumulator::<16>::new(products.len()), &products);

    let merged = HeapAccumulator::new(a_row.len()).build_row(&a_row, &b);
    println!("{:>8}: {} entries, columns ascending", "heap", merged.len());
    Ok(())
}
