//! Benchmark problems: a two-objective knee family and a multi-UAV
//! mission-planning surrogate.

pub mod knee;
pub mod mission;

use std::fmt::Debug;

use rand::RngCore;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;
use crate::types::{Fitness, Objectives};

pub use knee::KneeBenchmark;
pub use mission::{MissionGenome, MissionProblem, MissionScenario, MissionSpec};

/// An optimization problem together with its variation operators.
///
/// `evaluate` must be pure: the engine evaluates individuals in parallel and
/// relies on the result depending only on the genome.
pub trait Problem: Sync {
    type Genome: Clone + Debug + PartialEq + Send + Sync + Serialize + DeserializeOwned;

    fn num_objectives(&self) -> usize;

    fn constraints_total(&self) -> usize;

    /// Per-objective values far above anything `evaluate` returns; they seed
    /// the running minima of the normalization bounds.
    fn objective_upper_bounds(&self) -> Objectives<f64>;

    fn random_genome(&self, rng: &mut dyn RngCore) -> Self::Genome;

    fn evaluate(&self, genome: &Self::Genome) -> Result<Fitness<f64>>;

    fn crossover(
        &self,
        a: &Self::Genome,
        b: &Self::Genome,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::Genome, Self::Genome)>;

    fn mutate(&self, genome: &Self::Genome, probability: f64, rng: &mut dyn RngCore) -> Self::Genome;
}
