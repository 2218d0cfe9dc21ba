//! The generational loop: evaluate, archive, extract the knee front, adapt
//! the cone angle, breed.

use std::collections::HashSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adaptation::{GoldenSection, Phase, DEFAULT_TOLERANCE};
use crate::archive::{build_archive, select_elites, tournament_select, SelectionConfig};
use crate::bounds::Bounds;
use crate::dominance::{knee_front, ConeParams};
use crate::error::{Error, Result};
use crate::metrics::hypervolume;
use crate::problems::Problem;
use crate::types::{Evaluated, Individual, Objectives};

/// How the cone angle is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    /// Plain Pareto dominance, the 90° cone.
    Pareto,
    /// A cone held at `theta` degrees for the whole run.
    FixedAngle { theta: f64 },
    /// Starts at 90° and tunes the angle with the golden-section controller.
    SelfAdaptive,
}

impl Variant {
    /// Short stable label, e.g. `pareto`, `fixed_135`, `self_adaptive`.
    pub fn label(&self) -> String {
        match self {
            Variant::Pareto => "pareto".into(),
            Variant::FixedAngle { theta } => format!("fixed_{theta}"),
            Variant::SelfAdaptive => "self_adaptive".into(),
        }
    }

    fn initial_cone(&self) -> Result<ConeParams<f64>> {
        match *self {
            Variant::Pareto | Variant::SelfAdaptive => Ok(ConeParams::pareto()),
            Variant::FixedAngle { theta } => ConeParams::new(theta),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgorithmConfig {
    pub variant: Variant,
    /// Archive size, also the number of offspring per generation.
    pub lambda: usize,
    /// Elites copied unchanged into the next generation.
    pub mu: usize,
    pub tournament_size: usize,
    pub mut_probability: f64,
    /// Generations without a change of the knee front before stopping.
    pub stop_gen: usize,
    pub max_gen: usize,
    /// Bracket width in degrees at which the self-adaptive angle freezes.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            variant: Variant::SelfAdaptive,
            lambda: 200,
            mu: 20,
            tournament_size: 2,
            mut_probability: 0.05,
            stop_gen: 10,
            max_gen: 300,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
        }
    }
}

impl AlgorithmConfig {
    pub fn validate(&self) -> Result<()> {
        SelectionConfig::new(self.lambda, self.mu, self.tournament_size)?;
        self.variant.initial_cone()?;
        if !(0.0..=1.0).contains(&self.mut_probability) {
            return Err(Error::InvalidArgument(format!(
                "mutation probability {} outside [0, 1]",
                self.mut_probability
            )));
        }
        if self.stop_gen == 0 || self.max_gen == 0 {
            return Err(Error::InvalidArgument("stop_gen and max_gen must be positive".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Per-generation trace entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Angle the knee front of this generation was extracted with.
    pub theta: f64,
    pub front_size: usize,
    /// Hypervolume of the knee front normalized by the current bounds, reference all ones.
    pub hypervolume: f64,
    /// Online HDist of the knee front against the extremes seen so far.
    pub online_hdist: f64,
    /// Evaluations so far.
    pub evaluations: usize,
    pub phase: Option<Phase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<G> {
    pub variant: Variant,
    pub seed: u64,
    pub trace: Vec<GenerationStats>,
    pub final_front: Vec<Individual<G, f64>>,
    pub final_theta: f64,
    pub bounds: Bounds<f64>,
    pub generations: usize,
    /// Whether the run stopped because the knee front stayed unchanged for `stop_gen` generations.
    pub converged: bool,
    pub wall_time_s: f64,
}

impl<G> RunRecord<G> {
    pub fn final_objectives(&self) -> Vec<Objectives<f64>> {
        self.final_front.iter().map(|i| i.objectives().clone()).collect()
    }
}

/// Runs one optimization.
///
/// Deterministic for a given configuration: the only randomness is a ChaCha
/// stream seeded from `cfg.seed`, and parallel evaluation preserves order.
pub fn run<P: Problem>(problem: &P, cfg: &AlgorithmConfig) -> Result<RunRecord<P::Genome>> {
    cfg.validate()?;
    let started = Instant::now();
    let sel = SelectionConfig::new(cfg.lambda, cfg.mu, cfg.tournament_size)?;
    let m = problem.num_objectives();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bounds = Bounds::new(m, &problem.objective_upper_bounds())?;
    let mut cone = cfg.variant.initial_cone()?;
    let mut controller = GoldenSection::<f64>::new();
    let adaptive = matches!(cfg.variant, Variant::SelfAdaptive);

    let mut population: Vec<Individual<P::Genome, f64>> =
        (0..cfg.lambda).map(|_| Individual::new(problem.random_genome(&mut rng))).collect();
    let mut evaluations = 0usize;
    let mut trace = Vec::new();
    let mut previous_front: Option<Vec<Vec<f64>>> = None;
    let mut previous_hv = 0.0;
    let mut unchanged = 0usize;
    let mut converged = false;
    let mut front: Vec<Individual<P::Genome, f64>> = Vec::new();
    let mut used_theta = cone.theta();

    for generation in 1..=cfg.max_gen {
        evaluations += evaluate_pending(problem, &mut population, &mut bounds)?;

        let (unique, duplicates) = split_duplicates(population);
        let unique_count = unique.len().min(cfg.lambda);
        let mut archive = build_archive(unique, &sel, &cone, &bounds);
        let worst_rank = archive.iter().filter_map(|i| i.fitness().rank).max().unwrap_or(0);
        for mut dup in duplicates.into_iter().take(cfg.lambda.saturating_sub(archive.len())) {
            let f = dup.fitness_mut();
            f.rank = Some(worst_rank + 1);
            f.sparsity = 0.0;
            archive.push(dup);
        }

        used_theta = cone.theta();
        let members = knee_front(&archive[..unique_count], &cone, &bounds);
        front = members.iter().map(|&i| archive[i].clone()).collect();

        let mut key: Vec<Vec<f64>> = front.iter().map(|i| i.objectives().to_vec()).collect();
        key.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        if previous_front.as_ref() == Some(&key) {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        previous_front = Some(key);

        let normalized: Vec<Objectives<f64>> = front.iter().map(|i| bounds.normalize(i.objectives())).collect();
        let hv = hypervolume(&normalized, &vec![1.0; m]);
        let phase = if adaptive {
            let phase = controller.advance(hv, front.len(), previous_hv, cfg.mu, cfg.tolerance);
            cone = ConeParams::new(controller.theta)?;
            Some(phase)
        } else {
            controller.observe(hv, front.len());
            None
        };
        trace.push(GenerationStats {
            generation,
            theta: used_theta,
            front_size: front.len(),
            hypervolume: hv,
            online_hdist: controller.online_hdist(hv, front.len()),
            evaluations,
            phase,
        });
        previous_hv = hv;

        if unchanged >= cfg.stop_gen {
            converged = true;
            break;
        }
        if generation == cfg.max_gen {
            break;
        }

        let mut next: Vec<Individual<P::Genome, f64>> = select_elites(&archive, cfg.mu)
            .into_iter()
            .map(|i| archive[i].clone())
            .collect();
        while next.len() < cfg.lambda {
            let a = tournament_select(&archive, cfg.tournament_size, &mut rng);
            let b = tournament_select(&archive, cfg.tournament_size, &mut rng);
            let (c1, c2) = problem.crossover(&archive[a].genome, &archive[b].genome, &mut rng)?;
            for child in [c1, c2] {
                if next.len() < cfg.lambda {
                    next.push(Individual::new(problem.mutate(&child, cfg.mut_probability, &mut rng)));
                }
            }
        }
        population = archive;
        population.extend(next);
    }

    Ok(RunRecord {
        variant: cfg.variant,
        seed: cfg.seed,
        generations: trace.len(),
        trace,
        final_front: front,
        final_theta: used_theta,
        bounds,
        converged,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

/// Evaluates every individual without fitness and folds the results into
/// `bounds` in population order.
fn evaluate_pending<P: Problem>(
    problem: &P,
    population: &mut [Individual<P::Genome, f64>],
    bounds: &mut Bounds<f64>,
) -> Result<usize> {
    let results: Vec<(usize, Result<crate::types::Fitness<f64>>)> = population
        .par_iter()
        .enumerate()
        .filter(|(_, ind)| !ind.is_evaluated())
        .map(|(i, ind)| (i, problem.evaluate(&ind.genome)))
        .collect();
    let count = results.len();
    for (i, r) in results {
        let fitness = r.map_err(|e| Error::Evaluation(format!("individual {i}: {e}")))?;
        if fitness.objectives.dim() != problem.num_objectives() {
            return Err(Error::Evaluation(format!(
                "individual {i}: expected {} objectives, got {}",
                problem.num_objectives(),
                fitness.objectives.dim()
            )));
        }
        bounds.update(&fitness.objectives)?;
        population[i].fitness = Some(fitness);
    }
    Ok(count)
}

/// Splits off individuals whose objective vector and constraint count repeat
/// an earlier one. Copies would otherwise crowd the archive with clones.
fn split_duplicates<G>(population: Vec<Individual<G, f64>>) -> (Vec<Individual<G, f64>>, Vec<Individual<G, f64>>) {
    let mut seen: HashSet<(Vec<u64>, usize)> = HashSet::with_capacity(population.len());
    let mut unique = Vec::with_capacity(population.len());
    let mut duplicates = Vec::new();
    for ind in population {
        let f = ind.fitness();
        let key = (f.objectives.iter().map(|v| v.to_bits()).collect(), f.constraints_satisfied);
        if seen.insert(key) {
            unique.push(ind);
        } else {
            duplicates.push(ind);
        }
    }
    (unique, duplicates)
}
