//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use kneeopt::{MissionScenario, MissionSpec};

use crate::config::ExperimentConfig;
use crate::experiment::run_experiment;
use crate::summary::{emit_plot_data, summarize};

#[derive(Debug, Parser)]
#[command(name = "kneeopt", version, about = "Knee-point evolutionary search experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute an experiment config and write its artifacts and tables.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of repetitions per variant.
        #[arg(long)]
        reps: Option<usize>,
        /// Base seed; repetition `r` uses `seed + r`.
        #[arg(long)]
        seed: Option<u64>,
        /// Concurrent runs (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Recompute the metric tables from the artifacts in a directory.
    Summarize {
        #[arg(long)]
        out: PathBuf,
    },
    /// Write plot tables (generation series, normalized final fronts).
    Plotdata {
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a mission scenario file from a row of the benchmark table.
    GenScenario {
        /// Table row, 1 to 12.
        #[arg(long)]
        row: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, reps, seed, jobs } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(reps) = reps {
                cfg.repetitions = reps;
            }
            if let Some(seed) = seed {
                cfg.base_seed = seed;
            }
            let out = out
                .or_else(|| cfg.out_dir.clone())
                .ok_or_else(|| anyhow!("no output directory: pass --out or set out_dir in the config"))?;
            cfg.out_dir = None;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let summary = run_experiment(&cfg, &out, jobs)?;
            for row in &summary.table {
                println!("{:<16} {:<12} {:>14.6} {:>14.6} {:>4}", row.config_id, row.metric, row.mean, row.std, row.n);
            }
            Ok(())
        }
        Command::Summarize { out } => {
            summarize(&out)?;
            Ok(())
        }
        Command::Plotdata { out } => {
            let dir = emit_plot_data(&out)?;
            println!("{}", dir.display());
            Ok(())
        }
        Command::GenScenario { row, seed, out } => {
            let scenario = MissionScenario::generate(&MissionSpec::table_row(row)?, seed)?;
            let json = scenario.to_json()?;
            match out {
                Some(path) => std::fs::write(&path, json).with_context(|| format!("cannot write {}", path.display())),
                None => match writeln!(std::io::stdout().lock(), "{json}") {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                    _ => Ok(()),
                },
            }
        }
    }
}
