//! Exact distance parameters of a single graph, printed as a small report.

use std::fs;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use congest_core::gen;
use congest_core::graph::{
    all_eccentricities, diameter, radius, st_diameter, st_radius, Dist, Graph, NodeId,
    StPartition,
};
use congest_core::sim::mix_seed;

use crate::config::{ExperimentConfig, Model};

fn fmt(d: Dist) -> String {
    match d {
        Dist::Finite(x) => x.to_string(),
        Dist::Inf => "inf".into(),
    }
}

fn load(cfg: &ExperimentConfig) -> Result<Graph> {
    if let Some(path) = &cfg.graph_file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading graph {}", path.display()))?;
        return Graph::from_text(&text).with_context(|| format!("parsing {}", path.display()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 0x0AC1E));
    let base = match cfg.model {
        Model::Gnp => gen::gnp_connected(cfg.n, cfg.p, 100, &mut rng)?.0,
        Model::RandomTree => gen::random_tree(cfg.n, &mut rng),
        Model::Path => gen::path(cfg.n),
        Model::Clique => gen::clique(cfg.n),
    };
    if (cfg.weight_lo, cfg.weight_hi) == (1, 1) {
        Ok(base)
    } else {
        Ok(gen::with_random_weights(&base, cfg.weight_lo, cfg.weight_hi, &mut rng))
    }
}

pub fn cmd_oracle(cfg: &ExperimentConfig, st: Option<&str>) -> Result<u64> {
    let g = load(cfg)?;
    println!(
        "n={} m={} directed={} weighted={}",
        g.n(),
        g.edge_count(),
        g.is_directed() as u8,
        g.is_weighted() as u8
    );
    println!("diameter: {}", fmt(diameter(&g)));
    println!("radius: {}", fmt(radius(&g)));
    println!("eccentricities:");
    for (v, e) in all_eccentricities(&g).iter().enumerate() {
        println!("  {v} {}", fmt(*e));
    }
    if let Some(spec) = st {
        let s: Vec<NodeId> = spec
            .split(',')
            .map(|tok| tok.trim().parse::<NodeId>().context("parsing --st node list"))
            .collect::<Result<_>>()?;
        let t: Vec<NodeId> = (0..g.n()).filter(|v| !s.contains(v)).collect();
        let part = StPartition::new(g.n(), &s, &t)?;
        println!("st_diameter: {}", fmt(st_diameter(&g, &part)?));
        println!("st_radius: {}", fmt(st_radius(&g, &part)?));
    }
    Ok(0)
}
