use serde::{Deserialize, Serialize};

/// Sample mean and standard deviation (n - 1 denominator; 0 for a single value).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { mean: f64::NAN, std: f64::NAN, n };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, std, n }
    }
}

/// Final-front metrics of one run, as compared across algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub hypervolume: f64,
    pub front_size: usize,
    pub hdist: f64,
    pub generations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: String,
    #[serde(flatten)]
    pub stats: MeanStd,
}

pub const METRIC_NAMES: [&str; 4] = ["hypervolume", "front_size", "hdist", "generations"];

impl RunMetrics {
    pub fn value(&self, metric: &str) -> Option<f64> {
        match metric {
            "hypervolume" => Some(self.hypervolume),
            "front_size" => Some(self.front_size as f64),
            "hdist" => Some(self.hdist),
            "generations" => Some(self.generations as f64),
            _ => None,
        }
    }
}

/// Mean and sample deviation of every metric over a set of runs.
pub fn front_stats(runs: &[RunMetrics]) -> Vec<MetricSummary> {
    METRIC_NAMES
        .iter()
        .map(|&name| {
            let values: Vec<f64> = runs.iter().map(|r| r.value(name).expect("known metric")).collect();
            MetricSummary {
                metric: name.to_string(),
                stats: MeanStd::of(&values),
            }
        })
        .collect()
}
