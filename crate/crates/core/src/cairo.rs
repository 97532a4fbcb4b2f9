//! Iterated-sampling diameter, radius and eccentricity estimation on
//! unweighted undirected graphs.
//!
//! Each of the k iterations samples the active set W_i, elects the node
//! farthest from Z_i = (V minus W_i) union S_i, and keeps the l_{i+1}
//! nodes closest to the elected node; the loop only advances when the
//! new active set still touches Z_i. BFS trees from every sampled or
//! elected node then give each node a realized lower bound on its
//! eccentricity, sharpening with k at the price of more sources.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Graph, NodeId};
use crate::primitives::bfs::bfs_tree;
use crate::primitives::select::{select_closest_marked, SelectError};
use crate::primitives::{
    elect_farthest, multi_bfs, multi_key_reduce, KeySpec, RoundLedger,
};
use crate::sim::{mix_seed, RVal, ReduceOp, SimConfig};

/// Per-iteration budget: measured rounds per attempt stay under this many
/// multiples of the bootstrap bound D'.
pub const ITER_BUDGET_C: u64 = 6;
/// Whole-run budget: measured rounds <= BUDGET_C * (n^{1/(k+1)} ln n + D).
pub const BUDGET_C: f64 = 10.0;
pub const DEFAULT_RETRY_CAP: u64 = 20;
pub const DEFAULT_SLACK: u64 = 4;

/// Oversampling factor on the q ln n / |W| density. A failed intersection
/// check rebuys a whole elect plus select, most of two diameters, so
/// pushing the failure odds from roughly 1/n down to n^{-3/2} is cheap
/// insurance paid in a slightly larger root set.
const SAMPLE_BOOST: f64 = 1.5;

fn ln_n(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CairoOptions {
    /// Read q as n^{1/(k+1)} / ln n instead of (n / ln n)^{1/(k+1)}; the
    /// two parses differ only in a polylog factor but change sample sizes.
    pub alt_q: bool,
    /// Attempts per iteration before giving up on the intersection check.
    pub retry_cap: u64,
    /// Additive slack carried into every reported ratio check.
    pub slack: u64,
}

impl Default for CairoOptions {
    fn default() -> Self {
        CairoOptions { alt_q: false, retry_cap: DEFAULT_RETRY_CAP, slack: DEFAULT_SLACK }
    }
}

pub fn q_value(n: usize, k: usize, alt: bool) -> f64 {
    let ln = ln_n(n);
    let exp = 1.0 / (k as f64 + 1.0);
    if alt {
        (n as f64).powf(exp) / ln
    } else {
        (n as f64 / ln).powf(exp)
    }
}

/// One completed iteration of the sampling loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationRecord {
    /// |W_i| entering the iteration.
    pub w_before: usize,
    /// S_i, the nodes that sampled themselves in.
    pub sample: Vec<NodeId>,
    /// w_{i+1}, farthest node from Z_i.
    pub elected: NodeId,
    /// l_{i+1} = ceil(l_i / q).
    pub ell_next: u64,
    /// W_{i+1}: the l_{i+1} nodes closest to the elected node.
    pub w_next: Vec<NodeId>,
    /// Attempts spent until the intersection check passed.
    pub attempts: u64,
    /// Measured rounds across all attempts of this iteration.
    pub rounds: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplingState {
    pub k: usize,
    pub q: f64,
    /// Twice the bootstrap BFS depth, the working diameter bound.
    pub d_prime: u64,
    pub iterations: Vec<IterationRecord>,
    /// S_k = W_k, folded into the BFS roots.
    pub s_last: Vec<NodeId>,
}

impl SamplingState {
    /// Every BFS source the estimate phase uses: each S_i, each elected
    /// node, and the surviving W_k.
    pub fn roots(&self) -> Vec<NodeId> {
        let mut r: Vec<NodeId> = self.s_last.clone();
        for it in &self.iterations {
            r.extend(it.sample.iter().copied());
            r.push(it.elected);
        }
        r.sort_unstable();
        r.dedup();
        r
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateBundle {
    /// Realized distance per node: a certified lower bound on ecc(v),
    /// exact at every root.
    pub est_ecc: Vec<u64>,
    pub d_hat: u64,
    /// min over all nodes of est_ecc.
    pub r_hat: u64,
    /// min over roots of their exact eccentricity, the other radius readout.
    pub r_hat_roots: u64,
    pub roots: Vec<NodeId>,
    pub rounds: u64,
    pub slack: u64,
    pub state: SamplingState,
}

#[derive(Debug, Error)]
pub enum CairoError {
    #[error("graph must be connected")]
    Disconnected,
    #[error("k must lie in [1, log2 n], got {0}")]
    BadK(usize),
    #[error("need at least 3 nodes")]
    TooSmall,
    #[error("iteration {iteration} failed the intersection check {attempts} times")]
    NonConvergence { iteration: usize, attempts: u64 },
    #[error("simulation failed: {0}")]
    Sim(String),
}

fn check_input(g: &Graph, k: usize) -> Result<(), CairoError> {
    assert!(!g.is_weighted() && !g.is_directed(), "estimator runs on plain graphs");
    if g.n() < 3 {
        return Err(CairoError::TooSmall);
    }
    if !graph::is_connected(g) {
        return Err(CairoError::Disconnected);
    }
    let k_max = (g.n() as f64).log2().floor() as usize;
    if k < 1 || k > k_max.max(1) {
        return Err(CairoError::BadK(k));
    }
    Ok(())
}

pub fn run_sampling_loop(
    g: &Graph,
    k: usize,
    seed: u64,
    cfg: &SimConfig,
    opts: &CairoOptions,
) -> Result<(SamplingState, RoundLedger), CairoError> {
    check_input(g, k)?;
    let mut ledger = RoundLedger::default();
    let (_, boot) = bfs_tree(g, 0, cfg).map_err(|e| CairoError::Sim(e.to_string()))?;
    ledger.add_measured("bootstrap_bfs", &boot.report);
    let d_prime = (2 * boot.depth()).max(1);
    let state = sampling_loop(g, k, seed, d_prime, cfg, opts, &mut ledger)?;
    Ok((state, ledger))
}

fn sampling_loop(
    g: &Graph,
    k: usize,
    seed: u64,
    d_prime: u64,
    cfg: &SimConfig,
    opts: &CairoOptions,
    ledger: &mut RoundLedger,
) -> Result<SamplingState, CairoError> {
    let n = g.n();
    let q = q_value(n, k, opts.alt_q);
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0xCA1));

    let mut w: Vec<NodeId> = (0..n).collect();
    let mut ell = n as u64;
    let mut iterations = Vec::with_capacity(k);

    for i in 0..k {
        let ell_next = ((ell as f64) / q).ceil().max(1.0) as u64;
        // boost * q ln n expected samples out of however many nodes are
        // still active, so a poly-log batch lands in the next window and
        // the intersection check passes with probability 1 - 1/poly(n)
        let p = (SAMPLE_BOOST * q * ln_n(n) / w.len() as f64).min(1.0);
        let mut attempts = 0;
        let rounds_before = ledger.measured;
        loop {
            attempts += 1;
            if attempts > opts.retry_cap {
                return Err(CairoError::NonConvergence { iteration: i, attempts: attempts - 1 });
            }
            let sample: Vec<NodeId> = w.iter().copied().filter(|_| rng.gen_bool(p)).collect();

            // Z_i = (V \ W_i) + S_i
            let mut in_z = vec![true; n];
            for &u in &w {
                in_z[u] = false;
            }
            for &s in &sample {
                in_z[s] = true;
            }
            let z: Vec<NodeId> = (0..n).filter(|&u| in_z[u]).collect();
            if z.is_empty() {
                continue;
            }

            let elect = elect_farthest(g, &z, cfg).map_err(|e| CairoError::Sim(e.to_string()))?;
            ledger.add_measured("elect", &elect.report);

            let sel = match select_closest_marked(g, elect.winner, ell_next, &in_z, cfg) {
                Ok(s) => s,
                Err(SelectError::Sim(e)) => return Err(CairoError::Sim(e)),
                Err(e) => return Err(CairoError::Sim(e.to_string())),
            };
            ledger.add_measured("select", &sel.report);

            if sel.verdict {
                iterations.push(IterationRecord {
                    w_before: w.len(),
                    sample,
                    elected: elect.winner,
                    ell_next,
                    w_next: sel.members.clone(),
                    attempts,
                    rounds: ledger.measured - rounds_before,
                });
                w = sel.members;
                ell = ell_next;
                break;
            }
        }
    }

    Ok(SamplingState { k, q, d_prime, iterations, s_last: w })
}

/// Full pipeline: sampling loop, BFS from every root, then one pipelined
/// tree pass fusing per-root eccentricities with the radius readout.
pub fn estimate(
    g: &Graph,
    k: usize,
    seed: u64,
    cfg: &SimConfig,
    opts: &CairoOptions,
) -> Result<(EstimateBundle, RoundLedger), CairoError> {
    check_input(g, k)?;
    let n = g.n();
    let mut ledger = RoundLedger::default();
    let (tree, boot) = bfs_tree(g, 0, cfg).map_err(|e| CairoError::Sim(e.to_string()))?;
    ledger.add_measured("bootstrap_bfs", &boot.report);
    let d_prime = (2 * boot.depth()).max(1);

    let state = sampling_loop(g, k, seed, d_prime, cfg, opts, &mut ledger)?;
    let roots = state.roots();

    let mb = multi_bfs(g, &roots, cfg).map_err(|e| CairoError::Sim(e.to_string()))?;
    ledger.add_measured("multi_bfs", &mb.report);

    // key i carries max over v of d(roots[i], v), the exact eccentricity
    // of root i; a trailing Min key collects the smallest non-root
    // estimate so r_hat needs no second pass
    let kk = mb.sources.len();
    let mut is_root = vec![false; n];
    for &r in &mb.sources {
        is_root[r] = true;
    }
    let mut specs = vec![KeySpec { op: ReduceOp::Max, with_arg: false }; kk];
    specs.push(KeySpec { op: ReduceOp::Min, with_arg: false });
    let contributions: Vec<Vec<Option<RVal>>> = (0..n)
        .map(|v| {
            let mut row: Vec<Option<RVal>> = Vec::with_capacity(kk + 1);
            let mut far = 0;
            for drow in &mb.dist {
                let d = drow[v].expect_finite();
                far = far.max(d);
                row.push(Some(RVal::plain(d)));
            }
            row.push((!is_root[v]).then(|| RVal::plain(far)));
            row
        })
        .collect();
    let reduce = multi_key_reduce(g, &tree, &specs, &contributions, cfg)
        .map_err(|e| CairoError::Sim(e.to_string()))?;
    ledger.add_measured("estimate_reduce", &reduce.report);
    let eccs: Vec<u64> = reduce.finals[..kk].iter().map(|r| r.val).collect();

    // non-roots bound their eccentricity by the farthest known root;
    // roots substitute the exact value their own BFS produced
    let mut est = vec![0u64; n];
    for v in 0..n {
        est[v] = mb
            .dist
            .iter()
            .map(|row| row[v].expect_finite())
            .max()
            .expect("at least one root");
    }
    for (i, &r) in mb.sources.iter().enumerate() {
        est[r] = eccs[i];
    }

    let d_hat = *eccs.iter().max().expect("roots non-empty");
    let r_hat_roots = *eccs.iter().min().expect("roots non-empty");
    // the Min key sits at its identity n * w_max when every node is a
    // root, which exceeds any eccentricity, so min() stays correct
    let r_hat = reduce.finals[kk].val.min(r_hat_roots);
    let bundle = EstimateBundle {
        est_ecc: est,
        d_hat,
        r_hat,
        r_hat_roots,
        roots: mb.sources.clone(),
        rounds: ledger.measured,
        slack: opts.slack,
        state,
    };
    Ok((bundle, ledger))
}

/// Multiplicative factor the diameter estimate is good to: 2 - 1/2^k.
pub fn diameter_factor(k: usize) -> f64 {
    2.0 - 1.0 / 2f64.powi(k as i32)
}

/// Factor for per-node eccentricities: 3 - 4/(2^k + 1).
pub fn ecc_factor(k: usize) -> f64 {
    3.0 - 4.0 / (2f64.powi(k as i32) + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::{all_eccentricities, diameter, radius};

    fn exact_ecc(g: &Graph) -> Vec<u64> {
        all_eccentricities(g).iter().map(|d| d.expect_finite()).collect()
    }

    fn check_bundle(g: &Graph, bundle: &EstimateBundle, k: usize) {
        let eccs = exact_ecc(g);
        let d_true = *eccs.iter().max().unwrap();
        let slack = bundle.slack as f64;
        for (v, &e) in eccs.iter().enumerate() {
            let est = bundle.est_ecc[v];
            assert!(est <= e, "node {}: estimate {} above true ecc {}", v, est, e);
            assert!(
                e as f64 <= ecc_factor(k) * est as f64 + slack,
                "node {}: ecc {} not covered by {} * factor + slack",
                v, e, est
            );
        }
        assert!(bundle.d_hat <= d_true);
        assert!(d_true as f64 <= diameter_factor(k) * bundle.d_hat as f64 + slack);
        assert_eq!(bundle.d_hat, *bundle.est_ecc.iter().max().unwrap());
        assert_eq!(bundle.r_hat, *bundle.est_ecc.iter().min().unwrap());
        for (i, &r) in bundle.roots.iter().enumerate() {
            let _ = i;
            assert_eq!(bundle.est_ecc[r], eccs[r], "root {} must know its exact ecc", r);
        }
    }

    #[test]
    fn k10_single_iteration_structure() {
        let g = gen::clique(10);
        let (state, ledger) =
            run_sampling_loop(&g, 1, 42, &SimConfig::default(), &CairoOptions::default()).unwrap();
        assert_eq!(state.iterations.len(), 1);
        let it = &state.iterations[0];
        assert_eq!(it.w_before, 10);
        let expect_ell = (10.0 / state.q).ceil() as u64;
        assert_eq!(it.ell_next, expect_ell);
        assert_eq!(it.w_next.len() as u64, expect_ell);
        assert_eq!(state.s_last, it.w_next);
        assert_eq!(ledger.violations, 0);
    }

    #[test]
    fn clique_diameter_is_exact() {
        for n in [6, 13] {
            let g = gen::clique(n);
            let (bundle, _) =
                estimate(&g, 1, 7, &SimConfig::default(), &CairoOptions::default()).unwrap();
            assert_eq!(bundle.d_hat, 1);
            check_bundle(&g, &bundle, 1);
        }
    }

    #[test]
    fn path64_k1_bounds() {
        let g = gen::path(64);
        let (bundle, ledger) =
            estimate(&g, 1, 3, &SimConfig::default(), &CairoOptions::default()).unwrap();
        assert!(bundle.d_hat <= 63);
        assert!(63.0 <= diameter_factor(1) * bundle.d_hat as f64 + bundle.slack as f64);
        check_bundle(&g, &bundle, 1);
        assert_eq!(ledger.violations, 0);
    }

    #[test]
    fn random_graph_all_bounds_both_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let (g, _) = gen::gnp_connected(100, 0.06, 100, &mut rng).unwrap();
        for k in [1, 2] {
            let (bundle, ledger) =
                estimate(&g, k, 17 + k as u64, &SimConfig::default(), &CairoOptions::default())
                    .unwrap();
            check_bundle(&g, &bundle, k);

            // size accounting: roots stay near n^{1/(k+1)} log n
            let target = (g.n() as f64).powf(1.0 / (k as f64 + 1.0)) * ln_n(g.n());
            assert!(
                (bundle.roots.len() as f64) <= 4.0 * target,
                "k={}: {} roots vs target {:.1}",
                k, bundle.roots.len(), target
            );

            // per-iteration and total round budgets
            for it in &bundle.state.iterations {
                assert!(
                    it.rounds <= ITER_BUDGET_C * bundle.state.d_prime * it.attempts,
                    "iteration cost {} over budget", it.rounds
                );
            }
            let d_true = diameter(&g).expect_finite();
            let budget = BUDGET_C * (target + d_true as f64);
            assert!(
                (ledger.measured as f64) <= budget,
                "k={}: measured {} over budget {:.0}",
                k, ledger.measured, budget
            );
            assert_eq!(ledger.violations, 0);
        }
    }

    #[test]
    fn radius_readouts_bracket_truth() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (g, _) = gen::gnp_connected(80, 0.07, 100, &mut rng).unwrap();
        let (bundle, _) =
            estimate(&g, 1, 23, &SimConfig::default(), &CairoOptions::default()).unwrap();
        let r_true = radius(&g).expect_finite();
        // r_hat is a realized distance at its argmin node, so it cannot
        // exceed that node's ecc; the root readout is an exact ecc
        assert!(bundle.r_hat <= *exact_ecc(&g).iter().max().unwrap());
        assert!(bundle.r_hat_roots >= r_true);
        let f = diameter_factor(1);
        let slack = bundle.slack as f64;
        let covers = |v: u64| {
            let (lo, hi) = (v.min(r_true) as f64, v.max(r_true) as f64);
            hi <= f * lo + slack
        };
        assert!(
            covers(bundle.r_hat) || covers(bundle.r_hat_roots),
            "neither radius readout ({}, {}) is within factor {} of {}",
            bundle.r_hat, bundle.r_hat_roots, f, r_true
        );
    }

    #[test]
    fn deterministic_across_reruns() {
        let g = gen::path(30);
        let (a, la) = estimate(&g, 2, 9, &SimConfig::default(), &CairoOptions::default()).unwrap();
        let (b, lb) = estimate(&g, 2, 9, &SimConfig::default(), &CairoOptions::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(la.measured, lb.measured);
        let (c, _) = estimate(&g, 2, 10, &SimConfig::default(), &CairoOptions::default()).unwrap();
        let _ = c; // different seed may legally differ; just must not crash
    }

    #[test]
    fn alt_q_changes_sample_scale() {
        let n = 100;
        let main_q = q_value(n, 1, false);
        let alt = q_value(n, 1, true);
        assert!(main_q > alt, "alternative parse gives the smaller q at k=1");
        let g = gen::clique(10);
        let (state, _) = run_sampling_loop(
            &g, 1, 4,
            &SimConfig::default(),
            &CairoOptions { alt_q: true, ..Default::default() },
        )
        .unwrap();
        assert_eq!(state.q, q_value(10, 1, true));
    }

    #[test]
    fn input_validation() {
        let g = gen::path(10);
        assert!(matches!(
            run_sampling_loop(&g, 0, 1, &SimConfig::default(), &CairoOptions::default()),
            Err(CairoError::BadK(0))
        ));
        assert!(matches!(
            run_sampling_loop(&g, 9, 1, &SimConfig::default(), &CairoOptions::default()),
            Err(CairoError::BadK(9))
        ));
        let two = Graph::unweighted_undirected(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            run_sampling_loop(&two, 1, 1, &SimConfig::default(), &CairoOptions::default()),
            Err(CairoError::Disconnected)
        ));
    }
}
