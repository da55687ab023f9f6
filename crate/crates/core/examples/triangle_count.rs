//! Count triangles of a generated graph and check with a direct count.

use spgemm::apps::{count_triangles, symmetrize_pattern, triangle_decompose};
use spgemm::rmat::{g500_spec, generate};
use spgemm::{Algorithm, SpgemmConfig};

fn main() -> spgemm::Result<()> {
    let g = symmetrize_pattern(&generate(&g500_spec(10, 8, 4))?)?;
    let d = triangle_decompose(&g)?;
    println!("n={} edges={} nnz(L)={}", g.nrows(), g.nnz() / 2, d.lower.nnz());

    for alg in [Algorithm::Hash, Algorithm::HashChunked, Algorithm::Heap] {
        println!("{alg:>12}: {} triangles", count_triangles(&d, &SpgemmConfig::new(alg))?);
    }

    // each triangle u < v < w is seen once from its lowest vertex
    let mut direct = 0u64;
    for u in 0..g.nrows() {
        let nu = g.row(u).0;
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            let nv = g.row(v as usize).0;
            direct += nu.iter().filter(|&&w| w > v && nv.binary_search(&w).is_ok()).count() as u64;
        }
    }
    println!("{:>12}: {direct} triangles", "direct");
    Ok(())
}
