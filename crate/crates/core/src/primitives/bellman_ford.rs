//! Distributed Bellman-Ford for weighted graphs.
//!
//! Nodes hold their best known distance and broadcast it whenever it
//! improves, so traffic is improvement-driven and the run ends by
//! quiescence. Adopted values are minima over simple paths, which keeps
//! every announced word within the n * w_max range.

use crate::graph::{Direction, Dist, Graph, NodeId};
use crate::sim::{Ctx, Message, NodeProgram, RunReport, SimConfig, Status};

use super::EngineError;

struct BellmanFordProgram {
    is_source: bool,
    direction: Direction,
    best: Option<u64>,
    last_sent: Option<u64>,
}

impl NodeProgram for BellmanFordProgram {
    type Output = u64;

    fn step(&mut self, ctx: &mut Ctx, inbox: &[Option<Message>]) -> Status {
        if ctx.round == 1 && self.is_source {
            self.best = Some(0);
        }
        for (slot, msg) in inbox.iter().enumerate() {
            let Some(msg) = msg else { continue };
            let link = &ctx.links[slot];
            // Outward runs relax along arcs into this node, inward runs
            // along arcs leaving it. Undirected links carry both weights.
            let w = match self.direction {
                Direction::Outward => link.rev_weight,
                Direction::Inward => link.fwd_weight,
            };
            let Some(w) = w else { continue };
            let cand = msg.words()[0] + w as u64;
            if self.best.map_or(true, |b| cand < b) {
                self.best = Some(cand);
            }
        }
        if self.best != self.last_sent {
            let d = self.best.expect("only improvements are announced");
            ctx.broadcast(&Message::new(vec![d]));
            self.last_sent = self.best;
        }
        Status::Idle
    }

    fn output(&self) -> Option<u64> {
        self.best
    }
}

pub struct BellmanFordResult {
    pub dist: Vec<Dist>,
    pub report: RunReport<u64>,
}

/// Shortest path distances from (outward) or to (inward) the source set,
/// by synchronous Bellman-Ford. Handles weighted and unweighted graphs,
/// directed or not. Runtime is O(n) rounds.
pub fn bellman_ford(
    g: &Graph,
    sources: &[NodeId],
    direction: Direction,
    cfg: &SimConfig,
) -> Result<BellmanFordResult, EngineError> {
    let mut srcs: Vec<NodeId> = sources.to_vec();
    srcs.sort_unstable();
    srcs.dedup();
    if srcs.is_empty() {
        return Err(EngineError::EmptySources);
    }
    let programs: Vec<BellmanFordProgram> = (0..g.n())
        .map(|v| BellmanFordProgram {
            is_source: srcs.binary_search(&v).is_ok(),
            direction,
            best: None,
            last_sent: None,
        })
        .collect();
    let report = crate::sim::run(g, programs, cfg).map_err(|e| EngineError::Sim(e.to_string()))?;
    let dist = report
        .outputs
        .iter()
        .map(|o| o.map_or(Dist::Inf, Dist::Finite))
        .collect();
    Ok(BellmanFordResult { dist, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::sssp_exact;
    use rand::{Rng, SeedableRng};

    #[test]
    fn weighted_digraph_matches_dijkstra_both_directions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for trial in 0..6 {
            let (g, _) = gen::gnp_digraph_strong(30, 0.15, (1, 9), 100, &mut rng).unwrap();
            let src = rng.gen_range(0..30);
            for dir in [Direction::Outward, Direction::Inward] {
                let res = bellman_ford(&g, &[src], dir, &SimConfig::default()).unwrap();
                let oracle = sssp_exact(&g, src, dir).unwrap();
                assert_eq!(res.dist, oracle.dist, "trial {} {:?}", trial, dir);
                assert_eq!(res.report.violations.len(), 0);
                assert!(res.report.rounds <= 2 * g.n() as u64);
            }
        }
    }

    #[test]
    fn undirected_weighted_matches() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (g, _) = gen::gnp_connected(40, 0.1, 100, &mut rng).unwrap();
        let g = gen::with_random_weights(&g, 1, 5, &mut rng);
        let res = bellman_ford(&g, &[3], Direction::Outward, &SimConfig::default()).unwrap();
        let oracle = sssp_exact(&g, 3, Direction::Outward).unwrap();
        assert_eq!(res.dist, oracle.dist);
    }

    #[test]
    fn multi_source_is_pointwise_min() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let (g, _) = gen::gnp_connected(25, 0.15, 100, &mut rng).unwrap();
        let g = gen::with_random_weights(&g, 1, 7, &mut rng);
        let srcs = [2, 11, 19];
        let multi = bellman_ford(&g, &srcs, Direction::Outward, &SimConfig::default()).unwrap();
        for v in 0..g.n() {
            let want = srcs
                .iter()
                .map(|&s| sssp_exact(&g, s, Direction::Outward).unwrap().dist[v])
                .min()
                .unwrap();
            assert_eq!(multi.dist[v], want, "node {}", v);
        }
    }

    #[test]
    fn unreachable_nodes_stay_inf() {
        // directed path 0 -> 1 -> 2: nothing reaches 0 on an outward run from 1
        let g = Graph::new(3, true, true, &[(0, 1, 4), (1, 2, 4)]).unwrap();
        let res = bellman_ford(&g, &[1], Direction::Outward, &SimConfig::default()).unwrap();
        assert_eq!(res.dist, vec![Dist::Inf, Dist::Finite(0), Dist::Finite(4)]);
    }

    #[test]
    fn empty_sources_rejected() {
        let g = gen::path(3);
        assert!(matches!(
            bellman_ford(&g, &[], Direction::Outward, &SimConfig::default()),
            Err(EngineError::EmptySources)
        ));
    }
}
