//! Simplified multi-UAV mission-planning surrogate.
//!
//! Tasks are points in a square area, each needing a sensor and some work
//! time. A plan assigns UAVs to tasks, orders each UAV's visits, picks a
//! control station per UAV, a sensor per task and a flight profile per leg.
//! No-fly zones are modelled as fixed extra distance between task pairs, and
//! risk as the fuel margin used. Infeasibility is counted, never repaired.

mod evaluate;
mod genome;
mod scenario;

use rand::RngCore;

pub use evaluate::{constraints_total, evaluate, evaluate_with_dependencies, NUM_OBJECTIVES};
pub use genome::{MissionGenome, Profile};
pub use scenario::{
    Dependency, Gcs, MissionScenario, MissionSpec, NfzPenalty, Sensor, Task, Uav, AREA_KM, MAX_UAVS, MISSIONS,
};

use super::Problem;
use crate::error::Result;
use crate::types::{Fitness, Objectives};

pub const OBJECTIVE_NAMES: [&str; NUM_OBJECTIVES] =
    ["cost", "makespan", "risk", "uavs", "fuel", "flight_time", "distance"];

#[derive(Clone, Debug, PartialEq)]
pub struct MissionProblem {
    scenario: MissionScenario,
}

impl MissionProblem {
    pub fn new(scenario: MissionScenario) -> Result<Self> {
        scenario.validate()?;
        Ok(Self { scenario })
    }

    pub fn scenario(&self) -> &MissionScenario {
        &self.scenario
    }
}

impl Problem for MissionProblem {
    type Genome = MissionGenome;

    fn num_objectives(&self) -> usize {
        NUM_OBJECTIVES
    }

    fn constraints_total(&self) -> usize {
        constraints_total(&self.scenario)
    }

    fn objective_upper_bounds(&self) -> Objectives<f64> {
        Objectives::from_vec_unchecked(vec![1e9; NUM_OBJECTIVES])
    }

    fn random_genome(&self, rng: &mut dyn RngCore) -> MissionGenome {
        MissionGenome::random(&self.scenario, rng)
    }

    fn evaluate(&self, genome: &MissionGenome) -> Result<Fitness<f64>> {
        evaluate(genome, &self.scenario)
    }

    fn crossover(
        &self,
        a: &MissionGenome,
        b: &MissionGenome,
        rng: &mut dyn RngCore,
    ) -> Result<(MissionGenome, MissionGenome)> {
        a.crossover(b, &self.scenario, rng)
    }

    fn mutate(&self, genome: &MissionGenome, probability: f64, rng: &mut dyn RngCore) -> MissionGenome {
        genome.mutate(&self.scenario, probability, rng)
    }
}
