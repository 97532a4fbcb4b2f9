//! Shared fixtures for the criterion benchmarks: deterministic graphs at
//! the sizes the batteries use, so timings are comparable across runs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use congest_core::gen;
use congest_core::Graph;

pub fn gnp_fixture(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen::gnp_connected(n, p, 100, &mut rng).expect("connected fixture").0
}

pub fn digraph_fixture(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen::gnp_digraph_strong(n, p, (1, 8), 100, &mut rng)
        .expect("strong fixture")
        .0
}

pub fn spaced_sources(n: usize, count: usize) -> Vec<usize> {
    (0..count).map(|i| i * n / count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use congest_core::graph::is_connected;

    #[test]
    fn fixtures_are_deterministic_and_connected() {
        let a = gnp_fixture(100, 0.06, 7);
        let b = gnp_fixture(100, 0.06, 7);
        assert_eq!(a, b);
        assert!(is_connected(&a));
        assert_eq!(spaced_sources(100, 10).len(), 10);
    }
}
