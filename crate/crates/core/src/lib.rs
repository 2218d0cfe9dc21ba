//! Knee-oriented multi-objective evolutionary search.
//!
//! Solutions are compared by cone dominance: with objectives normalized to
//! the running bounds, `a` dominates `b` when `a` is Pareto-better on the
//! transformed values `Ω_i = f_i + a · Σ_{j≠i} f_j`. Widening the cone from
//! 90° (plain Pareto) towards 180° (a weighted sum) keeps only the knee
//! region of the front. The angle can be fixed or tuned during the run by a
//! golden-section search on an online quality score.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the engine
//! and problems work in `f64`. Aliases for both widths live at the crate root.

pub mod adaptation;
pub mod archive;
pub mod bounds;
pub mod dominance;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod problems;
pub mod scalar;
pub mod types;

pub use adaptation::{GoldenSection, Phase};
pub use archive::{build_archive, select_elites, tournament_select, SelectionConfig};
pub use bounds::Bounds;
pub use dominance::{assign_front_ranks, cone_dominates, knee_front, rank_fronts, ConeParams, RankedFronts};
pub use engine::{run, AlgorithmConfig, GenerationStats, RunRecord, Variant};
pub use error::{Error, Result};
pub use metrics::{hdist_offline, hdist_with_volume, hypervolume, rank_sum_test};
pub use problems::{KneeBenchmark, MissionProblem, MissionScenario, MissionSpec, Problem};
pub use scalar::Scalar;
pub use types::{feasibility_compare, Evaluated, Fitness, Individual, Objectives, Population};

pub type ObjectiveVector = Objectives<f64>;
pub type ObjectiveVectorF32 = Objectives<f32>;
pub type Fitness64 = Fitness<f64>;
pub type Fitness32 = Fitness<f32>;
pub type Bounds64 = Bounds<f64>;
pub type Bounds32 = Bounds<f32>;
pub type Cone64 = ConeParams<f64>;
pub type Cone32 = ConeParams<f32>;
pub type GoldenSection64 = GoldenSection<f64>;
pub type GoldenSection32 = GoldenSection<f32>;
