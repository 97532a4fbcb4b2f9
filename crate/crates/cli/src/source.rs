//! Graph acquisition: load from the text format or generate per config.
//! Generators retry until connected (cap 100); the retry count is surfaced
//! so batteries can log it.

use std::fs;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use congest_core::gen;
use congest_core::graph::{is_connected, is_strongly_connected, Graph};
use congest_core::sim::mix_seed;

use crate::config::{ExperimentConfig, Model};

/// What the chosen algorithm requires of its input graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    PlainConnected,
    WeightedUndirected,
    StrongDigraph,
}

const GEN_SALT: u64 = 0xA11CE;
const RETRY_CAP: u32 = 100;

pub fn acquire(cfg: &ExperimentConfig, trial_seed: u64, shape: Shape) -> Result<(Graph, u32)> {
    if let Some(path) = &cfg.graph_file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading graph {}", path.display()))?;
        let g = Graph::from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
        validate(&g, shape)?;
        return Ok((g, 0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(trial_seed, GEN_SALT));
    match shape {
        Shape::PlainConnected => {
            if (cfg.weight_lo, cfg.weight_hi) != (1, 1) {
                bail!("precondition violated: this algorithm needs an unweighted graph; drop the weight range");
            }
            plain(cfg, &mut rng)
        }
        Shape::WeightedUndirected => {
            let (base, retries) = plain_ignoring_weights(cfg, &mut rng)?;
            Ok((gen::with_random_weights(&base, cfg.weight_lo, cfg.weight_hi, &mut rng), retries))
        }
        Shape::StrongDigraph => {
            if cfg.model != Model::Gnp {
                bail!("precondition violated: strongly connected digraphs only come from the gnp model");
            }
            let (g, retries) =
                gen::gnp_digraph_strong(cfg.n, cfg.p, (cfg.weight_lo, cfg.weight_hi), RETRY_CAP, &mut rng)
                    .context("generating a strongly connected digraph")?;
            Ok((g, retries))
        }
    }
}

fn plain(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<(Graph, u32)> {
    match cfg.model {
        Model::Gnp => gen::gnp_connected(cfg.n, cfg.p, RETRY_CAP, rng)
            .context("generating a connected gnp graph"),
        Model::RandomTree => Ok((gen::random_tree(cfg.n, rng), 0)),
        Model::Path => Ok((gen::path(cfg.n), 0)),
        Model::Clique => Ok((gen::clique(cfg.n), 0)),
    }
}

fn plain_ignoring_weights(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<(Graph, u32)> {
    let stripped = ExperimentConfig { weight_lo: 1, weight_hi: 1, ..cfg.clone() };
    plain(&stripped, rng)
}

fn validate(g: &Graph, shape: Shape) -> Result<()> {
    match shape {
        Shape::PlainConnected => {
            if g.is_directed() || g.is_weighted() {
                bail!("precondition violated: this algorithm needs an unweighted undirected graph");
            }
            if !is_connected(g) {
                bail!("precondition violated: graph must be connected");
            }
        }
        Shape::WeightedUndirected => {
            if g.is_directed() {
                bail!("precondition violated: this algorithm needs an undirected graph");
            }
            if !is_connected(g) {
                bail!("precondition violated: graph must be connected");
            }
        }
        Shape::StrongDigraph => {
            if !is_strongly_connected(g) {
                bail!("precondition violated: graph must be strongly connected");
            }
        }
    }
    Ok(())
}
