//! Trial driver for the four algorithm batteries. Each trial checks the
//! advertised guarantees against exact oracles; a violated bound becomes a
//! recorded failure, not a panic, so the battery reports and exits 1.

use anyhow::{anyhow, Result};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use congest_core::bichromatic::{bichromatic_diameter_unweighted, bichromatic_diameter_weighted};
use congest_core::cairo::{self, estimate, CairoOptions};
use congest_core::gen;
use congest_core::graph::{all_eccentricities, diameter, st_diameter, Graph};
use congest_core::pseudo_center::{compute_pseudo_center, estimate_eccentricities};
use congest_core::sim::mix_seed;

use crate::config::{config_hash, ExperimentConfig};
use crate::source::{acquire, Shape};
use crate::table::{emit, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    PseudoCenter,
    Cairo,
    BichromaticUnweighted,
    BichromaticWeighted,
}

impl Algo {
    pub fn shape(self) -> Shape {
        match self {
            Algo::PseudoCenter => Shape::StrongDigraph,
            Algo::Cairo | Algo::BichromaticUnweighted => Shape::PlainConnected,
            Algo::BichromaticWeighted => Shape::WeightedUndirected,
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Algo::PseudoCenter => &[
                "seed", "n", "m", "eps", "c_size", "d_prime", "max_ratio", "rounds", "violations",
                "cfg",
            ],
            Algo::Cairo => &[
                "seed", "n", "m", "k", "D_true", "D_hat", "r_true", "R_hat", "rounds",
                "violations", "cfg",
            ],
            Algo::BichromaticUnweighted => &[
                "seed", "n", "s_size", "D_ST_true", "D1", "D2", "D3", "D4", "D5", "estimate",
                "rounds", "size_warnings", "cfg",
            ],
            Algo::BichromaticWeighted => &[
                "seed", "n", "m", "estimate", "D_ST_true", "edge_weight", "flood_rounds",
                "rounds", "violations", "cfg",
            ],
        }
    }

    pub fn file_stem(self) -> &'static str {
        match self {
            Algo::PseudoCenter => "run_pseudo_center",
            Algo::Cairo => "run_cairo",
            Algo::BichromaticUnweighted => "run_bichromatic_unweighted",
            Algo::BichromaticWeighted => "run_bichromatic_weighted",
        }
    }
}

pub struct Trial {
    pub seed: u64,
    pub cells: String,
    /// Headline quality metric; estimator-specific, larger is looser.
    pub ratio: f64,
    pub rounds: u64,
    pub retries: u32,
    pub failures: Vec<String>,
}

const PART_SALT: u64 = 0xB1;
const EST_SALT: u64 = 0xE57;

pub fn run_trial(algo: Algo, cfg: &ExperimentConfig, seed: u64) -> Result<Trial> {
    let (g, retries) = acquire(cfg, seed, algo.shape())?;
    let mut failures = Vec::new();
    let fail = |cond: bool, msg: String, sink: &mut Vec<String>| {
        if !cond {
            sink.push(msg);
        }
    };
    let sim = cfg.sim(seed);
    let n = g.n();
    let m = g.edge_count();

    let trial = match algo {
        Algo::Cairo => {
            let eccs: Vec<u64> =
                all_eccentricities(&g).iter().map(|d| d.expect_finite()).collect();
            let d_true = *eccs.iter().max().ok_or_else(|| anyhow!("empty graph"))?;
            let r_true = *eccs.iter().min().expect("nonempty");
            let opts = CairoOptions { alt_q: cfg.alt_q, slack: cfg.slack, ..Default::default() };
            let (bundle, ledger) =
                estimate(&g, cfg.k, seed, &sim, &opts).map_err(|e| anyhow!("{e}"))?;
            let factor_d = cairo::diameter_factor(cfg.k);
            let factor_e = cairo::ecc_factor(cfg.k);
            fail(bundle.d_hat <= d_true, format!("D_hat {} over D {d_true}", bundle.d_hat), &mut failures);
            fail(
                d_true.saturating_sub(bundle.slack) as f64 <= factor_d * bundle.d_hat as f64,
                format!("diameter ratio {d_true}/{} over {factor_d:.4}", bundle.d_hat),
                &mut failures,
            );
            for v in 0..n {
                fail(
                    eccs[v] as f64 <= factor_e * bundle.est_ecc[v] as f64 + bundle.slack as f64,
                    format!("ecc ratio at node {v}"),
                    &mut failures,
                );
            }
            // the two radius readouts bracket the true value
            fail(bundle.r_hat <= r_true, format!("R_hat {} over r {r_true}", bundle.r_hat), &mut failures);
            fail(
                bundle.r_hat_roots >= r_true,
                format!("root radius readout {} under r {r_true}", bundle.r_hat_roots),
                &mut failures,
            );
            for it in &bundle.state.iterations {
                fail(
                    it.rounds <= cairo::ITER_BUDGET_C * bundle.state.d_prime,
                    format!("iteration took {} rounds, D' = {}", it.rounds, bundle.state.d_prime),
                    &mut failures,
                );
            }
            fail(ledger.violations == 0, format!("{} bandwidth violations", ledger.violations), &mut failures);
            Trial {
                seed,
                cells: format!(
                    "{seed},{n},{m},{},{d_true},{},{r_true},{},{},{}",
                    cfg.k, bundle.d_hat, bundle.r_hat, ledger.measured, ledger.violations
                ),
                ratio: d_true as f64 / bundle.d_hat.max(1) as f64,
                rounds: ledger.measured,
                retries,
                failures,
            }
        }
        Algo::PseudoCenter => {
            let engine = cfg.sssp_engine();
            let eccs: Vec<u64> =
                all_eccentricities(&g).iter().map(|d| d.expect_finite()).collect();
            let psc = compute_pseudo_center(&g, engine, cfg.eps, seed, &sim)
                .map_err(|e| anyhow!("{e}"))?;
            let er = estimate_eccentricities(
                &g,
                &psc.center,
                engine,
                cfg.eps,
                mix_seed(seed, EST_SALT),
                &sim,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let bound = 2.0 + cfg.eps.powi(3) + 3.0 * cfg.eps * cfg.eps + 4.0 * cfg.eps;
            let mut max_ratio = 0f64;
            for v in 0..n {
                let est = er.estimate.est[v];
                fail(est >= eccs[v], format!("est under ecc at node {v}"), &mut failures);
                let ratio = est as f64 / eccs[v].max(1) as f64;
                max_ratio = max_ratio.max(ratio);
                fail(
                    est as f64 <= bound * eccs[v] as f64,
                    format!("est over {bound:.4} * ecc at node {v}"),
                    &mut failures,
                );
            }
            let lnn = (n as f64).ln();
            let c_size = psc.center.members.len();
            fail(
                (c_size as f64) <= congest_core::pseudo_center::C0 * lnn * lnn,
                format!("|C| = {c_size} over the log^2 bound"),
                &mut failures,
            );
            let mut ledger = psc.ledger.clone();
            ledger.merge(&er.ledger);
            fail(ledger.violations == 0, format!("{} bandwidth violations", ledger.violations), &mut failures);
            Trial {
                seed,
                cells: format!(
                    "{seed},{n},{m},{:.4},{c_size},{},{max_ratio:.4},{},{}",
                    cfg.eps, psc.d_prime, ledger.charged, ledger.violations
                ),
                ratio: max_ratio,
                rounds: ledger.charged,
                retries,
                failures,
            }
        }
        Algo::BichromaticUnweighted => {
            let mut prng = ChaCha8Rng::seed_from_u64(mix_seed(seed, PART_SALT));
            let part = gen::random_bipartition(n, &mut prng);
            let res = bichromatic_diameter_unweighted(&g, &part, seed, &sim)
                .map_err(|e| anyhow!("{e}"))?;
            let d_st = st_diameter(&g, &part)
                .map_err(|e| anyhow!("{e}"))?
                .expect_finite();
            fail(res.estimate <= d_st, format!("estimate {} over D_ST {d_st}", res.estimate), &mut failures);
            fail(
                3 * d_st <= 5 * res.estimate + 15,
                format!("D_ST {d_st} outside 5/3 * {} + 5", res.estimate),
                &mut failures,
            );
            fail(res.ledger.violations == 0, format!("{} bandwidth violations", res.ledger.violations), &mut failures);
            let d = &res.detail;
            Trial {
                seed,
                cells: format!(
                    "{seed},{n},{},{d_st},{},{},{},{},{},{},{},{}",
                    part.s_nodes().len(),
                    d.d1,
                    d.d2,
                    d.d3,
                    d.d4,
                    d.d5,
                    res.estimate,
                    res.ledger.measured,
                    d.size_warnings.len()
                ),
                ratio: d_st as f64 / res.estimate.max(1) as f64,
                rounds: res.ledger.measured,
                retries,
                failures,
            }
        }
        Algo::BichromaticWeighted => {
            let mut prng = ChaCha8Rng::seed_from_u64(mix_seed(seed, PART_SALT));
            let part = gen::random_bipartition(n, &mut prng);
            let (est, ledger) =
                bichromatic_diameter_weighted(&g, &part, cfg.sssp_engine(), seed, &sim)
                    .map_err(|e| anyhow!("{e}"))?;
            let d_st = st_diameter(&g, &part)
                .map_err(|e| anyhow!("{e}"))?
                .expect_finite();
            fail(est.estimate <= d_st, format!("D' {} over D_ST {d_st}", est.estimate), &mut failures);
            fail(
                d_st <= 2 * est.estimate + est.edge_weight,
                format!("D_ST {d_st} over 2 * {} + {}", est.estimate, est.edge_weight),
                &mut failures,
            );
            let hop_edges: Vec<_> = g.edges().iter().map(|&(u, v, _)| (u, v, 1)).collect();
            let hop_view = Graph::new(n, false, false, &hop_edges).expect("unit-weight copy");
            let hop = diameter(&hop_view).expect_finite();
            fail(
                est.flood_rounds <= 3 * hop,
                format!("flood {} over 3 * hop diameter {hop}", est.flood_rounds),
                &mut failures,
            );
            fail(ledger.violations == 0, format!("{} bandwidth violations", ledger.violations), &mut failures);
            Trial {
                seed,
                cells: format!(
                    "{seed},{n},{m},{},{d_st},{},{},{},{}",
                    est.estimate, est.edge_weight, est.flood_rounds, ledger.charged, ledger.violations
                ),
                ratio: d_st as f64 / est.estimate.max(1) as f64,
                rounds: ledger.charged,
                retries,
                failures,
            }
        }
    };
    Ok(trial)
}

/// Run the whole battery, emit the CSV, and return the failure count.
pub fn cmd_run(algo: Algo, cfg: &ExperimentConfig) -> Result<u64> {
    let hash = config_hash(cfg);
    let mut table = Table::new(algo.columns());
    let mut failures: Vec<String> = Vec::new();
    let mut retries_total: u64 = 0;
    let mut max_rounds = 0u64;
    let mut ratios: Vec<f64> = Vec::new();
    for i in 0..cfg.trials {
        let seed = cfg.seed + i;
        let t = run_trial(algo, cfg, seed)?;
        retries_total += u64::from(t.retries);
        max_rounds = max_rounds.max(t.rounds);
        ratios.push(t.ratio);
        for f in &t.failures {
            failures.push(format!("seed={seed}: {f}"));
        }
        table.push(t.seed, format!("{},{hash}", t.cells));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
    let max = ratios.iter().cloned().fold(0f64, f64::max);
    let mut comments = vec![
        format!("config={hash}"),
        format!("trials={} gen_retries={retries_total}", cfg.trials),
        format!("summary: mean_ratio={mean:.4} max_ratio={max:.4} max_rounds={max_rounds}"),
    ];
    for f in &failures {
        comments.push(format!("FAIL {f}"));
    }
    comments.push(format!("failures={}", failures.len()));
    emit(&table, &comments, cfg.output.as_deref(), algo.file_stem())?;
    Ok(failures.len() as u64)
}
