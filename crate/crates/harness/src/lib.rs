//! Batch experiments over the knee-search variants: configuration, parallel
//! repetitions, per-run artifacts and the comparison tables built from them.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod summary;

pub use config::{AlgorithmSettings, ExperimentConfig, ProblemConfig};
pub use experiment::run_experiment;
pub use summary::{emit_plot_data, summarize, Artifacts, ReferenceFront, Summary};
