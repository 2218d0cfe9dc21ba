//! Tables recomputed from the persisted runs of an experiment.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kneeopt::metrics::{hdist_with_volume, MeanStd, RunMetrics};
use kneeopt::{hypervolume, knee_front, rank_sum_test, Bounds, ConeParams, Fitness, Objectives, RunRecord};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::experiment::{run_path, trace_path, CONFIG_FILE};

pub const REFERENCE_FILE: &str = "reference_front.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const PVALUES_FILE: &str = "pvalues.csv";

/// The runs of one experiment, grouped by config id in configuration order.
pub struct Artifacts {
    pub config: ExperimentConfig,
    pub runs: Vec<(String, Vec<RunRecord<serde_json::Value>>)>,
}

impl Artifacts {
    /// Loads every run, failing with the full list of missing files.
    pub fn load(out: &Path) -> Result<Self> {
        let cfg_path = out.join(CONFIG_FILE);
        if !cfg_path.exists() {
            bail!("{} is not an experiment directory: {CONFIG_FILE} is missing", out.display());
        }
        let config = ExperimentConfig::load(&cfg_path)?;
        let mut missing: Vec<PathBuf> = Vec::new();
        let mut runs = Vec::new();
        for id in config.config_ids() {
            let mut records = Vec::new();
            for rep in 0..config.repetitions {
                let path = run_path(out, &id, rep);
                if !path.exists() {
                    missing.push(path);
                    continue;
                }
                let text = fs::read_to_string(&path)?;
                let record: RunRecord<serde_json::Value> =
                    serde_json::from_str(&text).with_context(|| format!("malformed run record {}", path.display()))?;
                records.push(record);
            }
            runs.push((id, records));
        }
        if !missing.is_empty() {
            let list: Vec<String> = missing.iter().map(|p| format!("  {}", p.display())).collect();
            bail!("missing {} run artifact(s):\n{}", missing.len(), list.join("\n"));
        }
        Ok(Self { config, runs })
    }

    pub fn records(&self) -> impl Iterator<Item = (&str, usize, &RunRecord<serde_json::Value>)> {
        self.runs
            .iter()
            .flat_map(|(id, recs)| recs.iter().enumerate().map(move |(rep, r)| (id.as_str(), rep, r)))
    }
}

/// Merged non-dominated set of every final front, with the box it spans.
///
/// Only members at the highest constraint level seen anywhere take part, so a
/// less feasible point can never enter the reference through a better
/// objective value.
#[derive(Debug)]
pub struct ReferenceFront {
    pub points: Vec<Objectives<f64>>,
    pub constraints_satisfied: usize,
    pub bounds: Bounds<f64>,
    /// Hypervolume of the normalized points, reference all ones.
    pub volume: f64,
}

impl ReferenceFront {
    /// Merges the final fronts of every run in the experiment.
    pub fn merge(artifacts: &Artifacts) -> Result<Self> {
        Self::from_records(artifacts.records().map(|(_, _, r)| r))
    }

    pub fn from_records<'a>(records: impl Iterator<Item = &'a RunRecord<serde_json::Value>>) -> Result<Self> {
        let members: Vec<&Fitness<f64>> = records
            .flat_map(|r| r.final_front.iter())
            .filter_map(|ind| ind.fitness.as_ref())
            .collect();
        let Some(top) = members.iter().map(|f| f.constraints_satisfied).max() else {
            bail!("no run produced a final front");
        };
        let mut candidates: Vec<Fitness<f64>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for f in members.into_iter().filter(|f| f.constraints_satisfied == top) {
            let key: Vec<u64> = f.objectives.iter().map(|v| v.to_bits()).collect();
            if seen.insert(key) {
                candidates.push(Fitness::unconstrained(f.objectives.clone()));
            }
        }
        let m = candidates[0].objectives.dim();
        let front = knee_front(&candidates, &ConeParams::pareto(), &Bounds::unit(m));
        let mut points: Vec<Objectives<f64>> = front.into_iter().map(|i| candidates[i].objectives.clone()).collect();
        points.sort_by(|a, b| a.as_slice().partial_cmp(b.as_slice()).expect("finite objectives"));
        let mut lo = points[0].clone().into_inner();
        let mut hi = lo.clone();
        for p in &points {
            for i in 0..m {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let bounds = Bounds::from_extremes(Objectives::new(lo)?, Objectives::new(hi)?)?;
        let normalized: Vec<Objectives<f64>> = points.iter().map(|p| bounds.normalize(p.as_slice())).collect();
        let volume = hypervolume(&normalized, &vec![1.0; m]);
        Ok(Self { points, constraints_satisfied: top, bounds, volume })
    }

    /// Offline HDist of a front against this reference, both normalized by
    /// the reference extremes; NaN when the reference encloses no volume.
    pub fn hdist(&self, front: &[Objectives<f64>]) -> Result<f64> {
        if !(self.volume > 0.0) {
            log::warn!("reference front encloses no hypervolume; offline HDist is undefined");
            return Ok(f64::NAN);
        }
        let s: Vec<Objectives<f64>> = front.iter().map(|f| self.normalize(f.as_slice())).collect();
        Ok(hdist_with_volume(&s, self.points.len(), self.volume, &vec![1.0; self.dim()])?)
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn normalize(&self, f: &[f64]) -> Objectives<f64> {
        self.bounds.normalize(f)
    }

    pub fn normalized_points(&self) -> Vec<Objectives<f64>> {
        self.points.iter().map(|p| self.normalize(p.as_slice())).collect()
    }
}

/// Per-run metrics against the merged reference.
#[derive(Clone, Debug, Serialize)]
pub struct RunRow {
    pub config_id: String,
    pub rep: usize,
    pub seed: u64,
    pub hypervolume: f64,
    pub front_size: usize,
    pub hdist: f64,
    /// HDist against the merged front of this repetition only.
    pub hdist_paired: f64,
    pub generations: usize,
    pub converged: bool,
}

/// Metrics summarized per configuration, in table order.
pub const SUMMARY_METRICS: [&str; 5] = ["hypervolume", "front_size", "hdist", "hdist_paired", "generations"];

impl RunRow {
    pub fn value(&self, metric: &str) -> f64 {
        match metric {
            "hdist_paired" => self.hdist_paired,
            _ => self.metrics().value(metric).unwrap_or_else(|| panic!("unknown metric {metric}")),
        }
    }

    pub fn metrics(&self) -> RunMetrics {
        RunMetrics {
            hypervolume: self.hypervolume,
            front_size: self.front_size,
            hdist: self.hdist,
            generations: self.generations,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub config_id: String,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PValueRow {
    pub metric: String,
    pub config_a: String,
    pub config_b: String,
    pub p_value: f64,
}

#[derive(Debug)]
pub struct Summary {
    pub reference: ReferenceFront,
    pub runs: Vec<RunRow>,
    pub table: Vec<SummaryRow>,
    pub pvalues: Vec<PValueRow>,
}

impl Summary {
    pub fn value(&self, config_id: &str, metric: &str) -> Option<&SummaryRow> {
        self.table.iter().find(|r| r.config_id == config_id && r.metric == metric)
    }

    pub fn pvalue(&self, metric: &str, a: &str, b: &str) -> Option<f64> {
        self.pvalues
            .iter()
            .find(|r| r.metric == metric && ((r.config_a == a && r.config_b == b) || (r.config_a == b && r.config_b == a)))
            .map(|r| r.p_value)
    }

    /// Metric values of every repetition of one configuration.
    pub fn samples(&self, config_id: &str, metric: &str) -> Vec<f64> {
        self.runs.iter().filter(|r| r.config_id == config_id).map(|r| r.value(metric)).collect()
    }
}

/// Computes every table from the artifacts alone.
///
/// `hdist` uses the front merged over every run of the experiment;
/// `hdist_paired` uses, for repetition `r`, the front merged over the runs of
/// all variants with that repetition's seed.
pub fn compute_summary(artifacts: &Artifacts) -> Result<Summary> {
    let reference = ReferenceFront::merge(artifacts)?;
    let ones = vec![1.0; reference.dim()];
    let paired: Vec<ReferenceFront> = (0..artifacts.config.repetitions)
        .map(|rep| ReferenceFront::from_records(artifacts.runs.iter().map(|(_, recs)| &recs[rep])))
        .collect::<Result<_>>()?;

    let mut runs = Vec::new();
    for (id, rep, record) in artifacts.records() {
        let front = record.final_objectives();
        let s: Vec<Objectives<f64>> = front.iter().map(|f| reference.normalize(f.as_slice())).collect();
        runs.push(RunRow {
            config_id: id.to_owned(),
            rep,
            seed: record.seed,
            hypervolume: hypervolume(&s, &ones),
            front_size: s.len(),
            hdist: reference.hdist(&front)?,
            hdist_paired: paired[rep].hdist(&front)?,
            generations: record.generations,
            converged: record.converged,
        });
    }

    let ids = artifacts.config.config_ids();
    let mut table = Vec::new();
    for id in &ids {
        let mine: Vec<&RunRow> = runs.iter().filter(|r| &r.config_id == id).collect();
        for metric in SUMMARY_METRICS {
            let values: Vec<f64> = mine.iter().map(|r| r.value(metric)).collect();
            let stats = MeanStd::of(&values);
            table.push(SummaryRow { config_id: id.clone(), metric: metric.to_owned(), mean: stats.mean, std: stats.std, n: stats.n });
        }
    }

    let mut summary = Summary { reference, runs, table, pvalues: Vec::new() };
    for metric in SUMMARY_METRICS {
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                let p_value = rank_sum_test(&summary.samples(a, metric), &summary.samples(b, metric));
                summary.pvalues.push(PValueRow {
                    metric: metric.to_owned(),
                    config_a: a.clone(),
                    config_b: b.clone(),
                    p_value,
                });
            }
        }
    }
    Ok(summary)
}

/// Recomputes and writes the reference front, per-run metrics, summary and p-value tables.
pub fn summarize(out: &Path) -> Result<Summary> {
    let artifacts = Artifacts::load(out)?;
    let summary = compute_summary(&artifacts)?;

    let mut w = csv::Writer::from_path(out.join(REFERENCE_FILE))?;
    let m = summary.reference.dim();
    w.write_record((1..=m).map(|i| format!("obj_{i}")))?;
    for p in &summary.reference.points {
        w.write_record(p.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;

    write_rows(&out.join(METRICS_FILE), &summary.runs)?;
    write_rows(&out.join(SUMMARY_FILE), &summary.table)?;
    write_rows(&out.join(PVALUES_FILE), &summary.pvalues)?;
    Ok(summary)
}

fn write_rows<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const PLOT_DIR: &str = "plot";
pub const SERIES_FILE: &str = "series.csv";
pub const PARALLEL_FILE: &str = "parallel.csv";

#[derive(Clone, Debug, Serialize)]
pub struct SeriesRow {
    pub config_id: String,
    pub generation: usize,
    /// Runs that were still going at this generation.
    pub count: usize,
    pub theta: f64,
    pub front_size: f64,
    pub hypervolume: f64,
    pub online_hdist: f64,
    pub evaluations: f64,
}

/// Per-generation means over the runs alive at each generation.
pub fn series(artifacts: &Artifacts) -> Vec<SeriesRow> {
    let mut rows = Vec::new();
    for (id, records) in &artifacts.runs {
        let longest = records.iter().map(|r| r.trace.len()).max().unwrap_or(0);
        for g in 0..longest {
            let alive: Vec<_> = records.iter().filter_map(|r| r.trace.get(g)).collect();
            let n = alive.len() as f64;
            let mean = |f: &dyn Fn(&kneeopt::GenerationStats) -> f64| alive.iter().map(|s| f(s)).sum::<f64>() / n;
            rows.push(SeriesRow {
                config_id: id.clone(),
                generation: alive[0].generation,
                count: alive.len(),
                theta: mean(&|s| s.theta),
                front_size: mean(&|s| s.front_size as f64),
                hypervolume: mean(&|s| s.hypervolume),
                online_hdist: mean(&|s| s.online_hdist),
                evaluations: mean(&|s| s.evaluations as f64),
            });
        }
    }
    rows
}

/// Writes the generation series and the normalized final fronts for plotting.
pub fn emit_plot_data(out: &Path) -> Result<PathBuf> {
    let artifacts = Artifacts::load(out)?;
    let mut missing = Vec::new();
    for (id, rep, _) in artifacts.records() {
        let trace = trace_path(out, id, rep);
        if !trace.exists() {
            missing.push(format!("  {}", trace.display()));
        }
    }
    if !missing.is_empty() {
        bail!("missing {} trace file(s):\n{}", missing.len(), missing.join("\n"));
    }

    let dir = out.join(PLOT_DIR);
    fs::create_dir_all(&dir)?;
    write_rows(&dir.join(SERIES_FILE), &series(&artifacts))?;

    let reference = ReferenceFront::merge(&artifacts)?;
    let m = reference.dim();
    let mut w = csv::Writer::from_path(dir.join(PARALLEL_FILE))?;
    let mut header = vec!["config_id".to_owned(), "rep".to_owned(), "member".to_owned()];
    header.extend((1..=m).map(|i| format!("obj_{i}")));
    w.write_record(&header)?;
    for (id, rep, record) in artifacts.records() {
        for (k, f) in record.final_objectives().iter().enumerate() {
            let mut row = vec![id.to_owned(), rep.to_string(), k.to_string()];
            row.extend(reference.normalize(f.as_slice()).iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(dir)
}
