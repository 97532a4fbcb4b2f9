//! Bi-chromatic diameter estimation: how far apart can an S node and a
//! T node be?
//!
//! Unweighted graphs get the five-estimate pipeline: sampled BFS sources
//! cover long S-T pairs from five complementary angles (random S and T
//! samples, closest counterparts, and balls around the node w whose
//! sample distances certify the largest radius D_s). The best of D1..D5
//! is a realized distance, hence never exceeds the truth, and lands
//! within factor 5/3 plus rounding.
//!
//! Weighted graphs use the minimum crossing edge (s, t): one SSSP to t
//! and one from s give D' = max(max_{s'} d(s',t), max_{t'} d(s,t')),
//! which sandwiches the truth between D' and 2D' + w(s,t).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Direction, Graph, NodeId, StPartition};
use crate::primitives::bfs::{bfs, bfs_tree};
use crate::primitives::flood::{flood_extremum, TupleCmp};
use crate::primitives::{
    multi_bfs, multi_key_reduce, sssp, KeySpec, MultiBfsResult, RoundLedger, SsspEngine,
};
use crate::sim::{mix_seed, RVal, ReduceOp, SimConfig, SpanningTree};

/// Sampling coefficients: Z keeps each S node with prob Z_SAMPLE_C
/// sqrt(n) ln n / |S|, X likewise over T with X_SAMPLE_C.
pub const Z_SAMPLE_C: f64 = 2.0;
pub const X_SAMPLE_C: f64 = 4.0;
/// Reported budget: measured rounds <= BUDGET_C * (sqrt(n) ln n + D).
pub const BUDGET_C: f64 = 30.0;
/// Ball sizes past SIZE_WARN_C * sqrt(n) raise a warning but the run
/// continues with the full set.
pub const SIZE_WARN_C: f64 = 4.0;
pub const DEFAULT_SLACK: u64 = 5;
const SAMPLE_RETRY_CAP: u32 = 20;

fn ln_n(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiveEstimates {
    pub z: Vec<NodeId>,
    pub x: Vec<NodeId>,
    pub d1: u64,
    pub d2: u64,
    pub d3: u64,
    pub d4: u64,
    pub d5: u64,
    /// Node with the largest locally certified radius D_s.
    pub w: NodeId,
    pub d_prime: u64,
    pub s_w: Vec<NodeId>,
    pub t_w: Vec<NodeId>,
    /// Closest S node per sampled t (t, s(t)).
    pub s_of: Vec<(NodeId, NodeId)>,
    /// Closest T node per ball member (s, t(s)).
    pub t_of: Vec<(NodeId, NodeId)>,
    pub size_warnings: Vec<String>,
}

#[derive(Debug)]
pub struct BichromaticResult {
    pub estimate: u64,
    pub detail: FiveEstimates,
    pub ledger: RoundLedger,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedEstimate {
    /// Endpoints and weight of the minimum crossing edge.
    pub s: NodeId,
    pub t: NodeId,
    pub edge_weight: u64,
    /// D' = max(max_{s' in S} d(s',t), max_{t' in T} d(s,t')).
    pub estimate: u64,
    /// Rounds the min-edge flood took, bounded by 3D.
    pub flood_rounds: u64,
}

#[derive(Debug, Error)]
pub enum BichromaticError {
    #[error("graph must be connected")]
    Disconnected,
    #[error("partition size does not match the graph")]
    SizeMismatch,
    #[error("unweighted estimator needs S and T to cover every node")]
    NotBichromatic,
    #[error("need at least 3 nodes")]
    TooSmall,
    #[error("sampling produced an empty set {0} times in a row")]
    SamplingStuck(u32),
    #[error("no edge crosses the partition")]
    NoCrossingEdge,
    #[error("simulation failed: {0}")]
    Sim(String),
}

/// Largest non-negative D with d(s,X) > D/5 and d(s,Z) > 2D/5.
fn local_radius(d_x: u64, d_z: u64) -> u64 {
    let from_x = (5 * d_x).saturating_sub(1);
    let from_z = (5 * d_z).saturating_sub(1) / 2;
    from_x.min(from_z)
}

fn sample_side(side: &[NodeId], p: f64, rng: &mut ChaCha8Rng) -> Vec<NodeId> {
    if p >= 1.0 {
        return side.to_vec();
    }
    side.iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

/// Max over rows of `mb` listed in `rows`, evaluated at nodes where
/// `eligible` holds; one pipelined Max key on the tree.
fn max_over(
    g: &Graph,
    tree: &SpanningTree,
    mb: &MultiBfsResult,
    rows: &[usize],
    eligible: &dyn Fn(NodeId) -> bool,
    name: &str,
    cfg: &SimConfig,
    ledger: &mut RoundLedger,
) -> Result<u64, BichromaticError> {
    let spec = vec![KeySpec { op: ReduceOp::Max, with_arg: false }];
    let contributions: Vec<Vec<Option<RVal>>> = (0..g.n())
        .map(|v| {
            if !eligible(v) {
                return vec![None];
            }
            let best = rows
                .iter()
                .map(|&i| mb.dist[i][v].expect_finite())
                .max()
                .unwrap_or(0);
            vec![Some(RVal::plain(best))]
        })
        .collect();
    let res = multi_key_reduce(g, tree, &spec, &contributions, cfg)
        .map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured(name, &res.report);
    Ok(res.finals[0].val)
}

/// Closest counterpart per source row: key j finds argmin over eligible
/// nodes of d(sources[j], v). Returns (source, counterpart) pairs.
fn closest_maps(
    g: &Graph,
    tree: &SpanningTree,
    mb: &MultiBfsResult,
    rows: &[(NodeId, usize)],
    eligible: &dyn Fn(NodeId) -> bool,
    name: &str,
    cfg: &SimConfig,
    ledger: &mut RoundLedger,
) -> Result<Vec<(NodeId, NodeId)>, BichromaticError> {
    let specs: Vec<KeySpec> = rows
        .iter()
        .map(|_| KeySpec { op: ReduceOp::Min, with_arg: true })
        .collect();
    let contributions: Vec<Vec<Option<RVal>>> = (0..g.n())
        .map(|v| {
            rows.iter()
                .map(|&(_, i)| {
                    if eligible(v) {
                        Some(RVal::tagged(mb.dist[i][v].expect_finite(), v))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let res = multi_key_reduce(g, tree, &specs, &contributions, cfg)
        .map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured(name, &res.report);
    Ok(rows
        .iter()
        .zip(res.finals.iter())
        .map(|(&(src, _), r)| (src, r.arg.expect("eligible side is non-empty")))
        .collect())
}

pub fn bichromatic_diameter_unweighted(
    g: &Graph,
    p: &StPartition,
    seed: u64,
    cfg: &SimConfig,
) -> Result<BichromaticResult, BichromaticError> {
    assert!(!g.is_weighted() && !g.is_directed(), "five-estimate pipeline runs on plain graphs");
    let n = g.n();
    if n < 3 {
        return Err(BichromaticError::TooSmall);
    }
    if p.n() != n {
        return Err(BichromaticError::SizeMismatch);
    }
    if !p.is_bichromatic() {
        return Err(BichromaticError::NotBichromatic);
    }
    if !graph::is_connected(g) {
        return Err(BichromaticError::Disconnected);
    }

    let mut ledger = RoundLedger::default();
    let (tree, boot) = bfs_tree(g, 0, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("bootstrap_bfs", &boot.report);

    // Z and X: local coin flips, retried while either side comes up empty
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0xB1C));
    let root_n = (n as f64).sqrt() * ln_n(n);
    let z_p = (Z_SAMPLE_C * root_n / p.s_nodes().len() as f64).min(1.0);
    let x_p = (X_SAMPLE_C * root_n / p.t_nodes().len() as f64).min(1.0);
    let (z, x) = {
        let mut tries = 0;
        loop {
            tries += 1;
            if tries > SAMPLE_RETRY_CAP {
                return Err(BichromaticError::SamplingStuck(SAMPLE_RETRY_CAP));
            }
            let z = sample_side(p.s_nodes(), z_p, &mut rng);
            let x = sample_side(p.t_nodes(), x_p, &mut rng);
            if !z.is_empty() && !x.is_empty() {
                break (z, x);
            }
        }
    };

    // one pipelined BFS from Z and X together
    let mut sources: Vec<NodeId> = z.iter().chain(x.iter()).copied().collect();
    sources.sort_unstable();
    let mb1 = multi_bfs(g, &sources, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("multi_bfs_zx", &mb1.report);

    let in_set = |set: &[NodeId]| {
        let mut f = vec![false; n];
        for &v in set {
            f[v] = true;
        }
        f
    };
    let in_z = in_set(&z);
    let z_rows: Vec<usize> =
        (0..mb1.sources.len()).filter(|&i| in_z[mb1.sources[i]]).collect();
    let x_rows: Vec<(NodeId, usize)> = (0..mb1.sources.len())
        .filter(|&i| !in_z[mb1.sources[i]])
        .map(|i| (mb1.sources[i], i))
        .collect();

    // D1 = farthest T node from any z, plus the s(t) counterpart map
    let d1 = max_over(g, &tree, &mb1, &z_rows, &|v| p.in_t(v), "d1", cfg, &mut ledger)?;
    let s_of = closest_maps(g, &tree, &mb1, &x_rows, &|v| p.in_s(v), "s_of", cfg, &mut ledger)?;

    // D2 = farthest T node from any s(t)
    let s_roots: Vec<NodeId> = s_of.iter().map(|&(_, s)| s).collect();
    let mb2 = multi_bfs(g, &s_roots, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("multi_bfs_st", &mb2.report);
    let all2: Vec<usize> = (0..mb2.sources.len()).collect();
    let d2 = max_over(g, &tree, &mb2, &all2, &|v| p.in_t(v), "d2", cfg, &mut ledger)?;

    // every S node certifies the radius its samples allow; the largest
    // wins a (d_x, d_z, id) flood compared by the derived radius
    let d_to = |rows: &[usize], v: usize| -> u64 {
        rows.iter().map(|&i| mb1.dist[i][v].expect_finite()).min().unwrap_or(u64::MAX)
    };
    let x_row_ids: Vec<usize> = x_rows.iter().map(|&(_, i)| i).collect();
    let candidates: Vec<Option<Vec<u64>>> = (0..n)
        .map(|v| {
            if p.in_s(v) {
                Some(vec![d_to(&x_row_ids, v), d_to(&z_rows, v), v as u64])
            } else {
                None
            }
        })
        .collect();
    let by_radius: TupleCmp = Arc::new(|a: &[u64], b: &[u64]| {
        local_radius(a[0], a[1])
            .cmp(&local_radius(b[0], b[1]))
            .then(b[2].cmp(&a[2]))
    });
    let flood = flood_extremum(g, candidates, by_radius, cfg)
        .map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("w_flood", &flood.report);
    let best = flood.best.expect("S is non-empty");
    let w = best[2] as NodeId;
    let d_prime = local_radius(best[0], best[1]);

    // balls around w: S_w within 2D'/5, T_w within D'/5
    let bw = bfs(g, w, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("w_bfs", &bw.report);
    let dist_w: Vec<u64> = bw.dist.iter().map(|d| d.expect_finite()).collect();
    let s_w: Vec<NodeId> =
        (0..n).filter(|&v| p.in_s(v) && 5 * dist_w[v] <= 2 * d_prime).collect();
    let t_w: Vec<NodeId> = (0..n).filter(|&v| p.in_t(v) && 5 * dist_w[v] <= d_prime).collect();

    let mut size_warnings = Vec::new();
    let warn_cap = (SIZE_WARN_C * (n as f64).sqrt()).ceil() as usize;
    for (name, len) in [("S_w", s_w.len()), ("T_w", t_w.len())] {
        if len > warn_cap {
            size_warnings.push(format!("{} has {} nodes, past {}", name, len, warn_cap));
        }
    }

    // D3 from the S-side ball, plus each member's closest T node
    let mb3 = multi_bfs(g, &s_w, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("multi_bfs_sw", &mb3.report);
    let all3: Vec<usize> = (0..mb3.sources.len()).collect();
    let d3 = max_over(g, &tree, &mb3, &all3, &|v| p.in_t(v), "d3", cfg, &mut ledger)?;
    let sw_rows: Vec<(NodeId, usize)> =
        mb3.sources.iter().copied().enumerate().map(|(i, s)| (s, i)).collect();
    let t_of = closest_maps(g, &tree, &mb3, &sw_rows, &|v| p.in_t(v), "t_of", cfg, &mut ledger)?;

    // D4 = farthest S node from any t(s)
    let t_roots: Vec<NodeId> = t_of.iter().map(|&(_, t)| t).collect();
    let mb4 = multi_bfs(g, &t_roots, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("multi_bfs_ts", &mb4.report);
    let all4: Vec<usize> = (0..mb4.sources.len()).collect();
    let d4 = max_over(g, &tree, &mb4, &all4, &|v| p.in_s(v), "d4", cfg, &mut ledger)?;

    // D5 from the T-side ball, when it exists
    let d5 = if t_w.is_empty() {
        0
    } else {
        let mb5 = multi_bfs(g, &t_w, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
        ledger.add_measured("multi_bfs_tw", &mb5.report);
        let all5: Vec<usize> = (0..mb5.sources.len()).collect();
        max_over(g, &tree, &mb5, &all5, &|v| p.in_s(v), "d5", cfg, &mut ledger)?
    };

    let estimate = [d1, d2, d3, d4, d5].into_iter().max().unwrap();
    Ok(BichromaticResult {
        estimate,
        detail: FiveEstimates {
            z,
            x,
            d1,
            d2,
            d3,
            d4,
            d5,
            w,
            d_prime,
            s_w,
            t_w,
            s_of,
            t_of,
            size_warnings,
        },
        ledger,
    })
}

pub fn bichromatic_diameter_weighted(
    g: &Graph,
    p: &StPartition,
    engine: SsspEngine,
    seed: u64,
    cfg: &SimConfig,
) -> Result<(WeightedEstimate, RoundLedger), BichromaticError> {
    assert!(!g.is_directed(), "crossing-edge estimator runs on undirected graphs");
    let n = g.n();
    if p.n() != n {
        return Err(BichromaticError::SizeMismatch);
    }
    if !graph::is_connected(g) {
        return Err(BichromaticError::Disconnected);
    }
    let mut ledger = RoundLedger::default();

    // one round of side exchange orients incident edges, then the
    // smallest (weight, s, t) floods out
    ledger.add_charged("side_exchange", 1);
    let mut candidates: Vec<Option<Vec<u64>>> = vec![None; n];
    for &(u, v, w) in g.edges() {
        let oriented = if p.in_s(u) && p.in_t(v) {
            Some((u, v))
        } else if p.in_s(v) && p.in_t(u) {
            Some((v, u))
        } else {
            None
        };
        if let Some((s_end, t_end)) = oriented {
            let cand = vec![w, s_end as u64, t_end as u64];
            for node in [u, v] {
                let slot = &mut candidates[node];
                if slot.as_ref().map_or(true, |c| cand < *c) {
                    *slot = Some(cand.clone());
                }
            }
        }
    }
    if candidates.iter().all(|c| c.is_none()) {
        return Err(BichromaticError::NoCrossingEdge);
    }
    let lex_min: TupleCmp = Arc::new(|a: &[u64], b: &[u64]| b.cmp(a));
    let flood =
        flood_extremum(g, candidates, lex_min, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("min_edge_flood", &flood.report);
    let flood_rounds = flood.report.rounds;
    let best = flood.best.expect("a crossing edge exists");
    let (edge_weight, s, t) = (best[0], best[1] as NodeId, best[2] as NodeId);

    let (tree, boot) = bfs_tree(g, 0, cfg).map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("bootstrap_bfs", &boot.report);
    let d_prime_hops = (2 * boot.depth()).max(1);

    // d(v, t) for the S side, d(s, v) for the T side
    let to_t = sssp(engine, g, t, Direction::Inward, mix_seed(seed, 1), d_prime_hops, cfg, &mut ledger)
        .map_err(|e| BichromaticError::Sim(e.to_string()))?;
    let from_s = sssp(engine, g, s, Direction::Outward, mix_seed(seed, 2), d_prime_hops, cfg, &mut ledger)
        .map_err(|e| BichromaticError::Sim(e.to_string()))?;

    let specs = vec![
        KeySpec { op: ReduceOp::Max, with_arg: false },
        KeySpec { op: ReduceOp::Max, with_arg: false },
    ];
    let contributions: Vec<Vec<Option<RVal>>> = (0..n)
        .map(|v| {
            vec![
                if p.in_s(v) { Some(RVal::plain(to_t.dist[v].expect_finite())) } else { None },
                if p.in_t(v) { Some(RVal::plain(from_s.dist[v].expect_finite())) } else { None },
            ]
        })
        .collect();
    let res = multi_key_reduce(g, &tree, &specs, &contributions, cfg)
        .map_err(|e| BichromaticError::Sim(e.to_string()))?;
    ledger.add_measured("two_maxes", &res.report);
    let estimate = res.finals[0].val.max(res.finals[1].val);

    Ok((WeightedEstimate { s, t, edge_weight, estimate, flood_rounds }, ledger))
}
