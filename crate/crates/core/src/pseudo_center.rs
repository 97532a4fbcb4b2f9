//! Pseudo-center construction and eccentricity over-estimation for
//! strongly connected weighted digraphs.
//!
//! The center grows by repeated sampling: draw S from the active set W,
//! find the node a farthest from S under approximate distances, then
//! discard every node at least as far from a as S itself is. W shrinks
//! geometrically with high probability, so O(log n) iterations of
//! O(log n)-sized samples leave a center of O(log^2 n) nodes whose
//! distance field 2-approximates every eccentricity (up to the oracle's
//! (1+eps) noise, squared).
//!
//! All distance work goes through a pluggable engine: Bellman-Ford runs
//! are simulated and measured, oracle engines answer out of band and
//! bill a fixed per-invocation charge.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Direction, Graph, NodeId};
use crate::primitives::bfs::bfs_tree;
use crate::primitives::flood::{flood_extremum, max_value_min_id};
use crate::primitives::{sssp, sssp_from_set, EngineError, RoundLedger, SsspEngine};
use crate::sim::{mix_seed, tree_reduce, ReduceItem, ReduceOp, RVal, SimConfig};

/// Sampling probability numerator: p = min(1, 24 ln n / |W|).
const SAMPLE_NUM: f64 = 24.0;
/// Accepted sample sizes, in units of ln n.
const WINDOW_LO: f64 = 8.0;
const WINDOW_HI: f64 = 36.0;
/// Iteration cap, in units of ln n, before declaring non-convergence.
const ITER_FACTOR: f64 = 10.0;
/// Center size bound |C| <= C0 * ln^2 n, asserted after every build.
pub const C0: f64 = 80.0;
const RESAMPLE_CAP: u32 = 100;
const RETRIES: u64 = 3;

/// Natural log with the tiny-n guard: thresholds must stay positive.
pub fn ln_n(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

/// Records one removal round: the sample, the elected anchor, and the
/// distance cut d_A(S, a) that justified discarding nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub sample: Vec<NodeId>,
    pub anchor: NodeId,
    pub threshold: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudoCenter {
    pub members: Vec<NodeId>,
    pub alpha: f64,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug)]
pub struct PscResult {
    pub center: PseudoCenter,
    pub ledger: RoundLedger,
    /// Hop-diameter proxy from the bootstrap BFS (twice its depth).
    pub d_prime: u64,
    /// |W| after each iteration of the successful attempt, starting at n.
    pub w_sizes: Vec<usize>,
    pub attempts: u64,
}

#[derive(Debug, Error)]
pub enum PscError {
    #[error("graph is not strongly connected: eccentricities are infinite, no center exists")]
    NotStronglyConnected,
    #[error("pseudo-center must be non-empty")]
    EmptyCenter,
    #[error("removal loop exceeded the iteration cap ({iterations}) on every retry")]
    NonConvergence { iterations: u64 },
    #[error("sampling window missed {0} times in a row")]
    SamplingStuck(u32),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("simulation failed: {0}")]
    Sim(String),
}

fn validate_eps(eps: f64) -> Result<(), PscError> {
    if eps < 0.0 || !eps.is_finite() {
        return Err(PscError::Engine(EngineError::NegativeEps(eps)));
    }
    Ok(())
}

/// Builds an alpha = (1+eps)^2 approximate pseudo-center. Las Vegas: a
/// non-converging attempt is retried with fresh randomness, and the
/// ledger keeps the cost of every attempt.
pub fn compute_pseudo_center(
    g: &Graph,
    engine: SsspEngine,
    eps: f64,
    seed: u64,
    cfg: &SimConfig,
) -> Result<PscResult, PscError> {
    engine.validate()?;
    validate_eps(eps)?;
    if !graph::is_strongly_connected(g) {
        return Err(PscError::NotStronglyConnected);
    }
    let n = g.n();
    let mut ledger = RoundLedger::default();
    let (_, boot) = bfs_tree(g, 0, cfg).map_err(|e| PscError::Sim(e.to_string()))?;
    ledger.add_measured("bootstrap_bfs", &boot.report);
    let d_prime = (2 * boot.depth()).max(1);

    let mut last_iters = 0;
    for attempt in 0..RETRIES {
        match removal_loop(g, engine, mix_seed(seed, attempt), d_prime, cfg, &mut ledger) {
            Ok((members, witnesses, w_sizes)) => {
                let size_bound = C0 * ln_n(n) * ln_n(n);
                assert!(
                    (members.len() as f64) <= size_bound.max(n as f64),
                    "center size {} exceeds bound {:.1}",
                    members.len(),
                    size_bound
                );
                let alpha = (1.0 + eps) * (1.0 + eps);
                return Ok(PscResult {
                    center: PseudoCenter { members, alpha, witnesses },
                    ledger,
                    d_prime,
                    w_sizes,
                    attempts: attempt + 1,
                });
            }
            Err(PscError::NonConvergence { iterations }) => last_iters = iterations,
            Err(e) => return Err(e),
        }
    }
    Err(PscError::NonConvergence { iterations: last_iters })
}

type LoopOutcome = (Vec<NodeId>, Vec<Witness>, Vec<usize>);

fn removal_loop(
    g: &Graph,
    engine: SsspEngine,
    seed: u64,
    d_prime: u64,
    cfg: &SimConfig,
    ledger: &mut RoundLedger,
) -> Result<LoopOutcome, PscError> {
    let n = g.n();
    let ln = ln_n(n);
    let cap = (ITER_FACTOR * ln).ceil() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_w = vec![true; n];
    let mut w_size = n;
    let mut center = BTreeSet::new();
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut w_sizes = vec![n];
    let mut iter = 0u64;

    while w_size > 0 {
        iter += 1;
        if iter > cap {
            return Err(PscError::NonConvergence { iterations: iter - 1 });
        }
        let active: Vec<NodeId> = (0..n).filter(|&u| in_w[u]).collect();
        let sample = draw_sample(&active, ln, &mut rng)?;
        let iter_seed = mix_seed(seed, iter);

        // f(u) = min over the sample of d_A(s, u)
        let f = sssp_from_set(engine, g, &sample, Direction::Outward, iter_seed, d_prime, cfg, ledger)?;
        let fvals: Vec<u64> = f
            .iter()
            .map(|d| d.finite().expect("strongly connected"))
            .collect();

        // a = argmax f, ties to the smaller id; everyone learns (f(a), a)
        let (anchor, threshold) = if engine.is_oracle() {
            ledger.add_charged("anchor_broadcast", d_prime);
            let mut best = (0u64, usize::MAX);
            for (v, &fv) in fvals.iter().enumerate() {
                if fv > best.0 || (fv == best.0 && v < best.1) {
                    best = (fv, v);
                }
            }
            (best.1, best.0)
        } else {
            let cands: Vec<Option<Vec<u64>>> = fvals
                .iter()
                .enumerate()
                .map(|(v, &fv)| Some(vec![fv, v as u64]))
                .collect();
            let res = flood_extremum(g, cands, Arc::new(max_value_min_id), cfg)
                .map_err(|e| PscError::Sim(e.to_string()))?;
            ledger.add_measured("anchor_flood", &res.report);
            let best = res.best.expect("every node offered a candidate");
            (best[1] as NodeId, best[0])
        };

        // one inward run from the anchor; nodes at or past the cut drop out
        let back = sssp(
            engine,
            g,
            anchor,
            Direction::Inward,
            mix_seed(iter_seed, 1),
            d_prime,
            cfg,
            ledger,
        )?;
        for u in 0..n {
            if in_w[u] && back.dist[u].expect_finite() >= threshold {
                in_w[u] = false;
                w_size -= 1;
            }
        }
        center.extend(sample.iter().copied());
        witnesses.push(Witness { sample, anchor, threshold });
        w_sizes.push(w_size);
    }
    Ok((center.into_iter().collect(), witnesses, w_sizes))
}

/// Bernoulli sample of the active set, retried until its size lands in
/// [8 ln n, 36 ln n]. Once W itself fits under the window's top the whole
/// of W is taken and the loop finishes deterministically.
fn draw_sample(
    active: &[NodeId],
    ln: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<NodeId>, PscError> {
    let w_size = active.len();
    if (w_size as f64) <= WINDOW_HI * ln {
        return Ok(active.to_vec());
    }
    let p = (SAMPLE_NUM * ln / w_size as f64).min(1.0);
    for _ in 0..RESAMPLE_CAP {
        let s: Vec<NodeId> = active.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        let size = s.len() as f64;
        if size >= WINDOW_LO * ln && size <= WINDOW_HI * ln {
            return Ok(s);
        }
    }
    Err(PscError::SamplingStuck(RESAMPLE_CAP))
}

/// Per-node eccentricity over-estimates from a pseudo-center:
/// est(v) = max_c d_A(v, c) + D_A(C) where D_A(C) = max_u min_c d_A(c, u).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EccEstimate {
    pub est: Vec<u64>,
    pub d_a_of_c: u64,
    pub diameter_est: u64,
    pub radius_est: u64,
}

pub struct EccResult {
    pub estimate: EccEstimate,
    pub ledger: RoundLedger,
    pub d_prime: u64,
}

pub fn estimate_eccentricities(
    g: &Graph,
    center: &PseudoCenter,
    engine: SsspEngine,
    eps: f64,
    seed: u64,
    cfg: &SimConfig,
) -> Result<EccResult, PscError> {
    engine.validate()?;
    validate_eps(eps)?;
    if center.members.is_empty() {
        return Err(PscError::EmptyCenter);
    }
    if !graph::is_strongly_connected(g) {
        return Err(PscError::NotStronglyConnected);
    }
    let n = g.n();
    let mut ledger = RoundLedger::default();
    let (tree, boot) = bfs_tree(g, 0, cfg).map_err(|e| PscError::Sim(e.to_string()))?;
    ledger.add_measured("bootstrap_bfs", &boot.report);
    let d_prime = (2 * boot.depth()).max(1);

    let mut members: Vec<NodeId> = center.members.clone();
    members.sort_unstable();
    members.dedup();

    // low(v) = min_c d_A(c, v) feeds D_A(C); high(v) = max_c d_A(v, c)
    let mut low = vec![u64::MAX; n];
    let mut high = vec![0u64; n];
    for (i, &c) in members.iter().enumerate() {
        let out = sssp(
            engine, g, c,
            Direction::Outward,
            mix_seed(seed, 2 * i as u64),
            d_prime, cfg, &mut ledger,
        )?;
        let back = sssp(
            engine, g, c,
            Direction::Inward,
            mix_seed(seed, 2 * i as u64 + 1),
            d_prime, cfg, &mut ledger,
        )?;
        for v in 0..n {
            low[v] = low[v].min(out.dist[v].expect_finite());
            high[v] = high[v].max(back.dist[v].expect_finite());
        }
    }

    // one tree pass carries max(low), max(high), min(high): enough for
    // D_A(C) and both endpoint estimates
    let items = vec![
        ReduceItem { op: ReduceOp::Max, with_arg: false },
        ReduceItem { op: ReduceOp::Max, with_arg: false },
        ReduceItem { op: ReduceOp::Min, with_arg: false },
    ];
    let values: Vec<Vec<RVal>> = (0..n)
        .map(|v| vec![RVal::plain(low[v]), RVal::plain(high[v]), RVal::plain(high[v])])
        .collect();
    let (vals, rep) =
        tree_reduce(g, &tree, items, values, cfg).map_err(|e| PscError::Sim(e.to_string()))?;
    ledger.add_measured("estimate_aggregate", &rep);

    let d_a_of_c = vals[0].val;
    let est: Vec<u64> = high.iter().map(|&h| h + d_a_of_c).collect();
    let estimate = EccEstimate {
        est,
        d_a_of_c,
        diameter_est: vals[1].val + d_a_of_c,
        radius_est: vals[2].val + d_a_of_c,
    };
    Ok(EccResult { estimate, ledger, d_prime })
}
