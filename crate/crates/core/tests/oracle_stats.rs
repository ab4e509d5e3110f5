use hfree_core::generators::star;
use hfree_core::graph::Graph;
use hfree_core::oracle::{NeighborOracle, OracleSession};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

fn critical_99(df: usize) -> f64 {
    ChiSquared::new(df as f64).unwrap().inverse_cdf(0.99)
}

#[test]
fn neighbor_answers_are_uniform() {
    let g = star(4);
    let mut s = OracleSession::new(&g, 2024);
    let mut counts = [0u64; 4];
    for _ in 0..100_000 {
        counts[s.random_neighbor(0).unwrap() - 1] += 1;
    }
    assert_eq!(s.query_count(), 100_000);
    assert!(chi_square(&counts) <= critical_99(3), "{counts:?}");
}

#[test]
fn vertex_draws_are_uniform_and_free() {
    let g = Graph::empty(300);
    let mut s = OracleSession::new(&g, 77);
    let mut counts = vec![0u64; 300];
    for _ in 0..100_000 {
        counts[s.uniform_vertex().unwrap()] += 1;
    }
    assert_eq!(s.query_count(), 0);
    assert!(chi_square(&counts) <= critical_99(299));
}

#[test]
fn fixed_seed_fixed_sequence() {
    let g = Graph::empty(50);
    let seq = |seed| {
        let mut s = OracleSession::new(&g, seed);
        (0..20).map(|_| s.uniform_vertex().unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(seq(5), seq(5));
}
