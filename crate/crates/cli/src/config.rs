//! Experiment configuration: flag values merged with an optional JSON file.
//! Fields in the file win over flags; unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use congest_core::primitives::SsspEngine;
use congest_core::sim::{Mode, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Gnp,
    RandomTree,
    Path,
    Clique,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineCfg {
    OracleExact,
    OraclePerturbed,
    BellmanFord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeCfg {
    Strict,
    LogOnly,
}

/// Everything a battery needs besides the subcommand itself. Every field
/// has a default, so a config file may set any subset of keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub graph_file: Option<PathBuf>,
    pub model: Model,
    pub n: usize,
    pub p: f64,
    pub weight_lo: u64,
    pub weight_hi: u64,
    pub seed: u64,
    pub trials: u64,
    pub k: usize,
    pub eps: f64,
    pub alt_q: bool,
    pub slack: u64,
    pub engine: EngineCfg,
    pub w_words: usize,
    pub mode: ModeCfg,
    pub round_cap: u64,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph_file: None,
            model: Model::Gnp,
            n: 50,
            p: 0.1,
            weight_lo: 1,
            weight_hi: 1,
            seed: 0,
            trials: 10,
            k: 1,
            eps: 0.25,
            alt_q: false,
            slack: 4,
            engine: EngineCfg::OracleExact,
            w_words: 4,
            mode: ModeCfg::Strict,
            round_cap: 1_000_000,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn sim(&self, seed: u64) -> SimConfig {
        SimConfig {
            w_words: self.w_words,
            mode: match self.mode {
                ModeCfg::Strict => Mode::Strict,
                ModeCfg::LogOnly => Mode::LogOnly,
            },
            round_cap: self.round_cap,
            seed,
        }
    }

    pub fn sssp_engine(&self) -> SsspEngine {
        match self.engine {
            EngineCfg::OracleExact => SsspEngine::OracleExact,
            EngineCfg::OraclePerturbed => SsspEngine::OraclePerturbed { eps: self.eps },
            EngineCfg::BellmanFord => SsspEngine::BellmanFord,
        }
    }
}

/// Overlay the JSON file (when given) onto the flag-derived config,
/// key by key, so the file wins where both specify a value.
pub fn resolve(flag_cfg: ExperimentConfig, config_path: Option<&Path>) -> Result<ExperimentConfig> {
    let Some(path) = config_path else {
        return Ok(flag_cfg);
    };
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let file: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let Some(overrides) = file.as_object() else {
        bail!("config {} must hold a JSON object", path.display());
    };
    let mut merged = serde_json::to_value(&flag_cfg).expect("config serializes");
    let base = merged.as_object_mut().expect("config is an object");
    for (key, value) in overrides {
        if !base.contains_key(key) {
            bail!("unknown config key `{key}` in {}", path.display());
        }
        base.insert(key.clone(), value.clone());
    }
    serde_json::from_value(merged).with_context(|| format!("applying {}", path.display()))
}

/// FNV-1a over the canonical JSON form; stable across runs and platforms
/// so CSV rows can name the exact configuration that produced them.
/// The output directory is left out, it changes where the rows land
/// but not what is in them.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let keyed = ExperimentConfig { output: None, ..cfg.clone() };
    let s = serde_json::to_string(&keyed).expect("config serializes");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ExperimentConfig { n: 123, eps: 0.5, ..Default::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn file_overrides_flags() {
        let dir = std::env::temp_dir().join(format!("congest-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        fs::write(&path, r#"{"n": 77, "model": "path"}"#).unwrap();
        let flags = ExperimentConfig { n: 10, seed: 9, ..Default::default() };
        let got = resolve(flags, Some(&path)).unwrap();
        assert_eq!(got.n, 77);
        assert_eq!(got.model, Model::Path);
        assert_eq!(got.seed, 9);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = std::env::temp_dir().join(format!("congest-cfg2-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        fs::write(&path, r#"{"nodes": 77}"#).unwrap();
        assert!(resolve(ExperimentConfig::default(), Some(&path)).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig { seed: 1, ..Default::default() };
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a), config_hash(&a.clone()));
    }

    #[test]
    fn hash_ignores_output_destination() {
        let a = ExperimentConfig { output: Some("x".into()), ..Default::default() };
        let b = ExperimentConfig { output: Some("y".into()), ..Default::default() };
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a), config_hash(&ExperimentConfig::default()));
    }
}
