//! Running every variant × repetition of an experiment and persisting the runs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use kneeopt::problems::mission::MissionSpec;
use kneeopt::{run, Evaluated, KneeBenchmark, MissionProblem, MissionScenario, Problem, RunRecord};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, ProblemConfig};
use crate::summary::{summarize, Summary};

pub const CONFIG_FILE: &str = "experiment.toml";
pub const SCENARIO_FILE: &str = "scenario.json";

pub fn run_path(out: &Path, config_id: &str, rep: usize) -> PathBuf {
    out.join("runs").join(config_id).join(format!("rep_{rep:03}.json"))
}

pub fn trace_path(out: &Path, config_id: &str, rep: usize) -> PathBuf {
    out.join("traces").join(config_id).join(format!("rep_{rep:03}.csv"))
}

pub fn front_path(out: &Path, config_id: &str, rep: usize) -> PathBuf {
    out.join("fronts").join(config_id).join(format!("rep_{rep:03}.csv"))
}

/// Builds the mission scenario a config refers to.
pub fn mission_scenario(problem: &ProblemConfig) -> Result<Option<MissionScenario>> {
    let ProblemConfig::Mission { row, spec, scenario_seed, scenario_file } = problem else {
        return Ok(None);
    };
    let sc = match (row, spec, scenario_file) {
        (Some(row), _, _) => MissionScenario::generate(&MissionSpec::table_row(*row)?, *scenario_seed)?,
        (_, Some(spec), _) => MissionScenario::generate(spec, *scenario_seed)?,
        (_, _, Some(file)) => {
            let text = fs::read_to_string(file).with_context(|| format!("cannot read scenario {}", file.display()))?;
            MissionScenario::from_json(&text)?
        }
        _ => return Err(anyhow!("mission problem without a scenario source")),
    };
    Ok(Some(sc))
}

/// Runs the experiment into `out` and writes the summary tables.
///
/// The output directory is created and probed for writability before any
/// optimization starts. `jobs` bounds the number of concurrent runs.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path, jobs: usize) -> Result<Summary> {
    cfg.validate()?;
    prepare_output(out)?;
    fs::write(out.join(CONFIG_FILE), cfg.to_toml()?)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("cannot start worker pool")?;
    pool.install(|| -> Result<()> {
        match &cfg.problem {
            ProblemConfig::Knee { n, k } => execute(&KneeBenchmark::new(*n, *k)?, cfg, out),
            problem @ ProblemConfig::Mission { .. } => {
                let sc = mission_scenario(problem)?.expect("mission config");
                fs::write(out.join(SCENARIO_FILE), sc.to_json()?)?;
                execute(&MissionProblem::new(sc)?, cfg, out)
            }
        }
    })?;
    summarize(out)
}

fn prepare_output(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create output directory {}", out.display()))?;
    let probe = out.join(".write-test");
    fs::write(&probe, b"").with_context(|| format!("output directory {} is not writable", out.display()))?;
    fs::remove_file(&probe)?;
    for sub in ["runs", "traces", "fronts"] {
        let dir = out.join(sub);
        if dir.exists() {
            fs::remove_dir_all(&dir)?;
        }
    }
    Ok(())
}

fn execute<P: Problem>(problem: &P, cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let jobs: Vec<(usize, usize)> = (0..cfg.variants.len())
        .flat_map(|v| (0..cfg.repetitions).map(move |r| (v, r)))
        .collect();
    jobs.par_iter().try_for_each(|&(v, rep)| -> Result<()> {
        let variant = cfg.variants[v];
        let seed = cfg.base_seed + rep as u64;
        let record = run(problem, &cfg.algorithm.for_run(variant, seed))
            .with_context(|| format!("{} repetition {rep} failed", variant.label()))?;
        log::info!(
            "{} rep {rep}: {} generations, front {}",
            variant.label(),
            record.generations,
            record.final_front.len()
        );
        persist(out, &variant.label(), rep, &record)
    })
}

fn persist<G: Serialize>(out: &Path, config_id: &str, rep: usize, record: &RunRecord<G>) -> Result<()> {
    let path = run_path(out, config_id, rep);
    fs::create_dir_all(path.parent().unwrap())?;
    fs::write(&path, serde_json::to_string_pretty(record)?)?;

    let path = trace_path(out, config_id, rep);
    fs::create_dir_all(path.parent().unwrap())?;
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["generation", "theta", "front_size", "hypervolume", "online_hdist", "evaluations", "phase"])?;
    for s in &record.trace {
        let phase = s.phase.map(|p| serde_json::to_value(p).unwrap().as_str().unwrap().to_owned()).unwrap_or_default();
        w.write_record([
            s.generation.to_string(),
            s.theta.to_string(),
            s.front_size.to_string(),
            s.hypervolume.to_string(),
            s.online_hdist.to_string(),
            s.evaluations.to_string(),
            phase,
        ])?;
    }
    w.flush()?;

    let path = front_path(out, config_id, rep);
    fs::create_dir_all(path.parent().unwrap())?;
    let mut w = csv::Writer::from_path(&path)?;
    let m = record.bounds.dim();
    let mut header = vec!["member".to_owned(), "constraints_satisfied".to_owned()];
    header.extend((1..=m).map(|i| format!("obj_{i}")));
    w.write_record(&header)?;
    for (k, ind) in record.final_front.iter().enumerate() {
        let mut row = vec![k.to_string(), ind.fitness().constraints_satisfied.to_string()];
        row.extend(ind.objectives().iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
