use spgemm::apps::{count_triangles, triangle_decompose};
use spgemm::mtx::parse_matrix_market;
use spgemm::rmat::{g500_spec, generate};
use spgemm::{read_matrix_market, spgemm, write_matrix_market, Algorithm, SpgemmConfig};
use std::path::Path;

#[test]
fn symmetric_pattern_file_counts_triangles() {
    // K4 stored as its lower triangle
    let text = "%%MatrixMarket matrix coordinate pattern symmetric\n% K4\n4 4 6\n2 1\n3 1\n4 1\n3 2\n4 2\n4 3\n";
    let g = parse_matrix_market(text.as_bytes(), Path::new("k4.mtx")).unwrap();
    assert_eq!(g.nnz(), 12);
    let d = triangle_decompose(&g).unwrap();
    for alg in [Algorithm::Hash, Algorithm::HashChunked, Algorithm::Heap] {
        assert_eq!(count_triangles(&d, &SpgemmConfig::new(alg)).unwrap(), 4);
    }
}

#[test]
fn product_survives_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(&g500_spec(9, 8, 3)).unwrap();
    let path = dir.path().join("a.mtx");
    write_matrix_market(&path, &a).unwrap();
    let back = read_matrix_market(&path).unwrap();
    assert!(back.bit_identical(&a));

    let cfg = SpgemmConfig::new(Algorithm::HashChunked).workers(3);
    assert!(spgemm(&back, &back, &cfg).unwrap().bit_identical(&spgemm(&a, &a, &cfg).unwrap()));
}

#[test]
fn integer_general_file_with_duplicates() {
    let text = "%%MatrixMarket matrix coordinate integer general\n2 3 3\n1 1 2\n1 1 3\n2 3 -4\n";
    let m = parse_matrix_market(text.as_bytes(), Path::new("dup.mtx")).unwrap();
    assert_eq!(m.to_dense(), vec![vec![5.0, 0.0, 0.0], vec![0.0, 0.0, -4.0]]);
}
