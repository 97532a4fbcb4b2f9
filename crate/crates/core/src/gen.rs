//! Seeded random graph generators. All take an explicit RNG so experiment
//! batteries stay reproducible.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphError, NodeId, StPartition, Weight};

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("generator produced no connected graph within {0} attempts")]
    RetriesExhausted(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::unweighted_undirected(n, &edges).expect("path is valid")
}

pub fn clique(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::unweighted_undirected(n, &edges).expect("clique is valid")
}

pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::unweighted_undirected(n, &edges).expect("star is valid")
}

/// Uniform attachment tree: node v > 0 picks a parent among 0..v.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    Graph::unweighted_undirected(n, &edges).expect("tree is valid")
}

/// Erdos-Renyi G(n, p), undirected and unweighted; may be disconnected.
pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::unweighted_undirected(n, &edges).expect("gnp is valid")
}

/// Resamples G(n, p) until connected; errors after `cap` attempts.
pub fn gnp_connected(n: usize, p: f64, cap: u32, rng: &mut ChaCha8Rng) -> Result<(Graph, u32), GenError> {
    for attempt in 0..cap {
        let g = gnp(n, p, rng);
        if crate::graph::is_connected(&g) {
            return Ok((g, attempt));
        }
    }
    Err(GenError::RetriesExhausted(cap))
}

/// Random weighted digraph with each ordered pair an arc with probability `p`,
/// resampled until strongly connected.
pub fn gnp_digraph_strong(
    n: usize,
    p: f64,
    weights: (Weight, Weight),
    cap: u32,
    rng: &mut ChaCha8Rng,
) -> Result<(Graph, u32), GenError> {
    assert!(weights.0 >= 1 && weights.0 <= weights.1);
    for attempt in 0..cap {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    edges.push((u, v, rng.gen_range(weights.0..=weights.1)));
                }
            }
        }
        let g = Graph::directed(n, &edges)?;
        if crate::graph::is_strongly_connected(&g) {
            return Ok((g, attempt));
        }
    }
    Err(GenError::RetriesExhausted(cap))
}

/// Copies the topology and assigns uniform random weights in `lo..=hi`.
pub fn with_random_weights(g: &Graph, lo: Weight, hi: Weight, rng: &mut ChaCha8Rng) -> Graph {
    assert!(lo >= 1 && lo <= hi);
    let edges: Vec<_> = g
        .edges()
        .iter()
        .map(|&(u, v, _)| (u, v, rng.gen_range(lo..=hi)))
        .collect();
    Graph::new(g.n(), g.is_directed(), true, &edges).expect("reweighting preserves validity")
}

/// Random bi-chromatic partition with both sides guaranteed non-empty.
pub fn random_bipartition(n: usize, rng: &mut ChaCha8Rng) -> StPartition {
    assert!(n >= 2, "need at least two nodes to bipartition");
    loop {
        let s: Vec<NodeId> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() && s.len() < n {
            return StPartition::bichromatic(n, &s).expect("sides non-empty");
        }
    }
}
