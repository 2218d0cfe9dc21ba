//! Two-objective knee test family on `[0, 1]^n`.
//!
//! ```text
//! g    = 1 + 9 * sum(x_2..x_n) / (n - 1)
//! r    = 5 + 10 (x_1 - 0.5)^2 + cos(2 K pi x_1) / K
//! f_1  = g r sin(pi x_1 / 2)
//! f_2  = g r cos(pi x_1 / 2)
//! ```
//!
//! The Pareto-optimal set is `x_2 = .. = x_n = 0`, where the front traces the
//! radius `r(x_1)` and has `K` knees.

use std::f64::consts::PI;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::Problem;
use crate::error::{Error, Result};
use crate::types::{Fitness, Objectives};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KneeBenchmark {
    pub n: usize,
    pub k: u32,
}

impl KneeBenchmark {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("knee benchmark needs n >= 2, got {n}")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("knee count must be positive".into()));
        }
        Ok(Self { n, k })
    }

    pub fn radius(&self, x1: f64) -> f64 {
        let k = self.k as f64;
        5.0 + 10.0 * (x1 - 0.5).powi(2) + (2.0 * k * PI * x1).cos() / k
    }

    pub fn objectives(&self, x: &[f64]) -> Result<[f64; 2]> {
        if x.len() != self.n {
            return Err(Error::Schema(format!("expected {} variables, got {}", self.n, x.len())));
        }
        if let Some(i) = x.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Schema(format!("variable {i} = {} outside [0, 1]", x[i])));
        }
        let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (self.n - 1) as f64;
        let scale = g * self.radius(x[0]);
        let angle = PI * x[0] / 2.0;
        Ok([scale * angle.sin(), scale * angle.cos()])
    }
}

impl Problem for KneeBenchmark {
    type Genome = Vec<f64>;

    fn num_objectives(&self) -> usize {
        2
    }

    fn constraints_total(&self) -> usize {
        0
    }

    fn objective_upper_bounds(&self) -> Objectives<f64> {
        Objectives::from_vec_unchecked(vec![1e6; 2])
    }

    fn random_genome(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        (0..self.n).map(|_| rng.gen::<f64>()).collect()
    }

    fn evaluate(&self, genome: &Vec<f64>) -> Result<Fitness<f64>> {
        let f = self.objectives(genome)?;
        Ok(Fitness::unconstrained(Objectives::new(f.to_vec())?))
    }

    /// Uniform exchange: each variable swaps between the children with probability 1/2.
    fn crossover(&self, a: &Vec<f64>, b: &Vec<f64>, rng: &mut dyn RngCore) -> Result<(Vec<f64>, Vec<f64>)> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::Schema("parent length differs from problem size".into()));
        }
        let (mut c1, mut c2) = (a.clone(), b.clone());
        for i in 0..self.n {
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut c1[i], &mut c2[i]);
            }
        }
        Ok((c1, c2))
    }

    /// Each variable is redrawn uniformly from `[0, 1]` with the given probability.
    fn mutate(&self, genome: &Vec<f64>, probability: f64, rng: &mut dyn RngCore) -> Vec<f64> {
        genome
            .iter()
            .map(|&v| if rng.gen_bool(probability) { rng.gen::<f64>() } else { v })
            .collect()
    }
}
