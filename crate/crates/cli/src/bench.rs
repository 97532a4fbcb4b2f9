//! Parameter sweeps: rerun a battery while one knob moves, emitting rows
//! ready for external plotting.

use anyhow::{Context, Result};
use clap::ValueEnum;

use crate::config::{config_hash, ExperimentConfig};
use crate::run::{run_trial, Algo};
use crate::table::{emit, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    N,
    K,
    Eps,
}

fn sweep_name(k: SweepKind) -> &'static str {
    match k {
        SweepKind::N => "n",
        SweepKind::K => "k",
        SweepKind::Eps => "eps",
    }
}

pub fn cmd_bench(
    algo: Algo,
    sweep: SweepKind,
    values: &str,
    cfg: &ExperimentConfig,
) -> Result<u64> {
    let mut table =
        Table::new(&["sweep", "value", "seed", "n", "rounds", "ratio", "failures", "cfg"]);
    let mut failures = 0u64;
    let mut comments = vec![format!("algo={algo:?} sweep={}", sweep_name(sweep))];
    for (vi, token) in values.split(',').map(str::trim).enumerate() {
        let mut cfg_v = cfg.clone();
        match sweep {
            SweepKind::N => cfg_v.n = token.parse().context("parsing --values as node counts")?,
            SweepKind::K => cfg_v.k = token.parse().context("parsing --values as k")?,
            SweepKind::Eps => cfg_v.eps = token.parse().context("parsing --values as eps")?,
        }
        let hash = config_hash(&cfg_v);
        comments.push(format!("value={token} config={hash}"));
        for i in 0..cfg_v.trials {
            let seed = cfg_v.seed + i;
            let t = run_trial(algo, &cfg_v, seed)?;
            failures += t.failures.len() as u64;
            // key groups rows by sweep value first, then seed
            let key = ((vi as u64) << 32) | seed;
            table.push(
                key,
                format!(
                    "{},{token},{seed},{},{},{:.4},{},{hash}",
                    sweep_name(sweep),
                    cfg_v.n,
                    t.rounds,
                    t.ratio,
                    t.failures.len()
                ),
            );
        }
    }
    comments.push(format!("failures={failures}"));
    emit(&table, &comments, cfg.output.as_deref(), &format!("bench_{}", sweep_name(sweep)))?;
    Ok(failures)
}
