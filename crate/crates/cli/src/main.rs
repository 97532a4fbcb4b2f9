//! Batch experiment driver over the simulator library: exact oracles,
//! algorithm batteries, gadget verification, and parameter sweeps.
//!
//! Exit codes: 0 all checks passed, 1 an in-run assertion failed,
//! 2 usage or configuration error.

mod bench;
mod config;
mod gadget;
mod oracle;
mod run;
mod source;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{resolve, EngineCfg, ExperimentConfig, Model, ModeCfg};

/// Environment variable naming the default output directory for CSV files.
const OUT_ENV: &str = "CONGEST_OUT";

#[derive(Parser)]
#[command(name = "congest", version, about = "CONGEST-model distance estimation batteries")]
struct Cli {
    /// JSON config file; its values override the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV files (default: env CONGEST_OUT, else stdout)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact diameter, radius and eccentricity table of one graph
    Oracle {
        #[command(flatten)]
        flags: ConfigFlags,
        /// Comma-separated S node ids; T is the complement. Adds ST values.
        #[arg(long)]
        st: Option<String>,
    },
    /// Run an algorithm battery, emitting per-trial CSV rows and a summary
    Run {
        #[arg(long, value_enum)]
        algo: run::Algo,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Build gadget instances and verify their distance gaps exactly
    Gadget {
        #[command(flatten)]
        args: gadget::GadgetArgs,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Sweep one parameter across a battery, emitting plot-ready CSV
    Bench {
        #[arg(long, value_enum)]
        algo: run::Algo,
        #[arg(long, value_enum)]
        sweep: bench::SweepKind,
        /// Comma-separated sweep values, e.g. 50,100,200
        #[arg(long)]
        values: String,
        #[command(flatten)]
        flags: ConfigFlags,
    },
}

/// Flag mirror of ExperimentConfig; every default matches the struct's.
#[derive(Args)]
struct ConfigFlags {
    /// Load this graph file instead of generating
    #[arg(long)]
    graph_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Model::Gnp)]
    model: Model,
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Edge probability for the gnp model
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    weight_lo: u64,
    #[arg(long, default_value_t = 1)]
    weight_hi: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    /// Sampling depth of the iterated estimator
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    /// Alternative parse of the sampling exponent q
    #[arg(long)]
    alt_q: bool,
    #[arg(long, default_value_t = 4)]
    slack: u64,
    #[arg(long, value_enum, default_value_t = EngineCfg::OracleExact)]
    engine: EngineCfg,
    #[arg(long, default_value_t = 4)]
    w_words: usize,
    #[arg(long, value_enum, default_value_t = ModeCfg::Strict)]
    mode: ModeCfg,
    #[arg(long, default_value_t = 1_000_000)]
    round_cap: u64,
}

impl ConfigFlags {
    fn into_config(self, output: Option<PathBuf>) -> ExperimentConfig {
        ExperimentConfig {
            graph_file: self.graph_file,
            model: self.model,
            n: self.n,
            p: self.p,
            weight_lo: self.weight_lo,
            weight_hi: self.weight_hi,
            seed: self.seed,
            trials: self.trials,
            k: self.k,
            eps: self.eps,
            alt_q: self.alt_q,
            slack: self.slack,
            engine: self.engine,
            w_words: self.w_words,
            mode: self.mode,
            round_cap: self.round_cap,
            output,
        }
    }
}

fn finalize(
    flags: ConfigFlags,
    config: Option<&std::path::Path>,
    output: Option<PathBuf>,
) -> Result<ExperimentConfig> {
    let mut cfg = resolve(flags.into_config(output), config)?;
    if cfg.output.is_none() {
        if let Ok(dir) = std::env::var(OUT_ENV) {
            if !dir.is_empty() {
                cfg.output = Some(PathBuf::from(dir));
            }
        }
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<u64> {
    let config = cli.config.as_deref();
    match cli.cmd {
        Cmd::Oracle { flags, st } => {
            let cfg = finalize(flags, config, cli.output)?;
            oracle::cmd_oracle(&cfg, st.as_deref())
        }
        Cmd::Run { algo, flags } => {
            let cfg = finalize(flags, config, cli.output)?;
            run::cmd_run(algo, &cfg)
        }
        Cmd::Gadget { args, flags } => {
            let cfg = finalize(flags, config, cli.output)?;
            gadget::cmd_gadget(&args, &cfg)
        }
        Cmd::Bench { algo, sweep, values, flags } => {
            let cfg = finalize(flags, config, cli.output)?;
            bench::cmd_bench(algo, sweep, &values, &cfg)
        }
    }
}

/// Die quietly when the reader of a pipe goes away, like any Unix filter,
/// instead of panicking inside println.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failures) => {
            eprintln!("{failures} assertion failure(s)");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
