//! Experiment configuration, read from a TOML document.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kneeopt::adaptation::DEFAULT_TOLERANCE;
use kneeopt::problems::mission::MissionSpec;
use kneeopt::{AlgorithmConfig, Variant};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemConfig {
    Knee {
        n: usize,
        k: u32,
    },
    /// A generated mission: either a row of the benchmark table or explicit
    /// counts, drawn with `scenario_seed`; or a scenario file.
    Mission {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        row: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spec: Option<MissionSpec>,
        #[serde(default)]
        scenario_seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scenario_file: Option<PathBuf>,
    },
}

/// Engine parameters shared by every variant of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgorithmSettings {
    pub lambda: usize,
    pub mu: usize,
    pub tournament_size: usize,
    pub mut_probability: f64,
    pub stop_gen: usize,
    pub max_gen: usize,
    pub tolerance: f64,
}

impl Default for AlgorithmSettings {
    fn default() -> Self {
        let d = AlgorithmConfig::default();
        Self {
            lambda: d.lambda,
            mu: d.mu,
            tournament_size: d.tournament_size,
            mut_probability: d.mut_probability,
            stop_gen: d.stop_gen,
            max_gen: d.max_gen,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl AlgorithmSettings {
    pub fn for_run(&self, variant: Variant, seed: u64) -> AlgorithmConfig {
        AlgorithmConfig {
            variant,
            lambda: self.lambda,
            mu: self.mu,
            tournament_size: self.tournament_size,
            mut_probability: self.mut_probability,
            stop_gen: self.stop_gen,
            max_gen: self.max_gen,
            tolerance: self.tolerance,
            seed,
        }
    }
}

fn default_repetitions() -> usize {
    30
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub problem: ProblemConfig,
    pub variants: Vec<Variant>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub algorithm: AlgorithmSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative scenario path is taken relative to the file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("in {}", path.display()))?;
        if let ProblemConfig::Mission { scenario_file: Some(file), .. } = &mut cfg.problem {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        if self.variants.is_empty() {
            bail!("at least one variant is required");
        }
        let mut labels: Vec<String> = self.variants.iter().map(|v| v.label()).collect();
        labels.sort();
        labels.dedup();
        if labels.len() != self.variants.len() {
            bail!("variants must be distinct");
        }
        for v in &self.variants {
            self.algorithm.for_run(*v, 0).validate()?;
        }
        if let ProblemConfig::Mission { row, spec, scenario_file, .. } = &self.problem {
            let sources = row.is_some() as u8 + spec.is_some() as u8 + scenario_file.is_some() as u8;
            if sources != 1 {
                bail!("a mission problem needs exactly one of `row`, `spec` or `scenario_file`");
            }
        }
        Ok(())
    }

    /// Identifiers of the variants, in configuration order.
    pub fn config_ids(&self) -> Vec<String> {
        self.variants.iter().map(|v| v.label()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
name = "mission-4"
repetitions = 3
base_seed = 100
variants = [
    { kind = "pareto" },
    { kind = "fixed_angle", theta = 135.0 },
    { kind = "self_adaptive" },
]

[problem]
kind = "mission"
row = 4
scenario_seed = 4

[algorithm]
lambda = 50
max_gen = 20
"#;

    #[test]
    fn parses_and_fills_defaults() {
        let cfg = ExperimentConfig::from_toml(EXAMPLE).unwrap();
        assert_eq!(cfg.repetitions, 3);
        assert_eq!(cfg.algorithm.lambda, 50);
        assert_eq!(cfg.algorithm.mu, 20);
        assert_eq!(cfg.algorithm.stop_gen, 10);
        assert_eq!(cfg.algorithm.mut_probability, 0.05);
        assert_eq!(cfg.config_ids(), ["pareto", "fixed_135", "self_adaptive"]);
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = ExperimentConfig::from_toml(EXAMPLE).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
    }

    #[test]
    fn repetitions_default_to_thirty() {
        let cfg = ExperimentConfig::from_toml(
            "name = \"k\"\nvariants = [{ kind = \"pareto\" }]\n[problem]\nkind = \"knee\"\nn = 2\nk = 1\n",
        )
        .unwrap();
        assert_eq!(cfg.repetitions, 30);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            EXAMPLE.replace("repetitions = 3", "repetitions = 0"),
            EXAMPLE.replace("{ kind = \"self_adaptive\" },", "{ kind = \"pareto\" },"),
            EXAMPLE.replace("row = 4", "row = 4\nspec = { tasks = 3, multi_uav_tasks = 0, uavs = 1, gcss = 1, nfzs = 0, dependencies = 0 }"),
            EXAMPLE.replace("lambda = 50", "lambda = 10"),
            EXAMPLE.replace("theta = 135.0", "theta = 200.0"),
            EXAMPLE.replace("kind = \"mission\"", "kind = \"volcano\""),
        ];
        for text in bad {
            assert!(ExperimentConfig::from_toml(&text).is_err(), "accepted:\n{text}");
        }
    }
}
