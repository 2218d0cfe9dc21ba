//! Environmental selection: archive truncation, sparsity, elitism and
//! tournaments, all keyed on the crowded comparison (rank, then sparsity).

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::dominance::{assign_front_ranks, ConeParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::Evaluated;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionConfig {
    /// Population size.
    pub lambda: usize,
    /// Elites copied unchanged into the next generation.
    pub mu: usize,
    pub tournament_size: usize,
}

impl SelectionConfig {
    pub fn new(lambda: usize, mu: usize, tournament_size: usize) -> Result<Self> {
        let cfg = Self {
            lambda,
            mu,
            tournament_size,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda == 0 || self.mu == 0 || self.tournament_size == 0 {
            return Err(Error::InvalidArgument(
                "lambda, mu and tournament size must be positive".into(),
            ));
        }
        if self.mu >= self.lambda {
            return Err(Error::InvalidArgument(format!(
                "elite count {} must be below population size {}",
                self.mu, self.lambda
            )));
        }
        Ok(())
    }
}

/// Crowding distance of the members of `front`, measured on objectives
/// normalized by `bounds`. Members at either end of any objective get +inf.
pub fn assign_sparsity<T: Scalar, I: Evaluated<T>>(items: &mut [I], front: &[usize], bounds: &Bounds<T>) {
    let n = front.len();
    if n == 0 {
        return;
    }
    let m = bounds.dim();
    let mut norm = vec![T::zero(); n * m];
    for (k, &i) in front.iter().enumerate() {
        bounds.normalize_into(&items[i].fitness().objectives, &mut norm[k * m..(k + 1) * m]);
    }
    let mut sparsity = vec![T::zero(); n];
    let mut order: Vec<usize> = (0..n).collect();
    for axis in 0..m {
        let key = |k: usize| norm[k * m + axis];
        order.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(Ordering::Equal));
        sparsity[order[0]] = T::infinity();
        sparsity[order[n - 1]] = T::infinity();
        for w in order.windows(3) {
            let gap = key(w[2]) - key(w[0]);
            sparsity[w[1]] = sparsity[w[1]] + gap;
        }
    }
    for (k, &i) in front.iter().enumerate() {
        items[i].fitness_mut().sparsity = sparsity[k];
    }
}

/// Ranks `population` under the cone, assigns sparsity per front, and keeps
/// the best `lambda` members.
///
/// Fronts are admitted whole while they fit; the first front that would
/// overflow is sorted by descending sparsity and cut. A population smaller
/// than `lambda` comes back whole, annotated but not truncated.
pub fn build_archive<T: Scalar, I: Evaluated<T>>(
    mut population: Vec<I>,
    cfg: &SelectionConfig,
    cone: &ConeParams<T>,
    bounds: &Bounds<T>,
) -> Vec<I> {
    let ranked = assign_front_ranks(&mut population, cone, bounds);
    for front in &ranked.fronts {
        assign_sparsity(&mut population, front, bounds);
    }
    if population.len() < cfg.lambda {
        return population;
    }

    let mut selected: Vec<usize> = Vec::with_capacity(cfg.lambda);
    for front in &ranked.fronts {
        if selected.len() + front.len() >= cfg.lambda {
            let mut front = front.clone();
            front.sort_by(|&a, &b| {
                let (sa, sb) = (population[a].fitness().sparsity, population[b].fitness().sparsity);
                sb.partial_cmp(&sa).unwrap_or(Ordering::Equal)
            });
            selected.extend_from_slice(&front[..cfg.lambda - selected.len()]);
            break;
        }
        selected.extend_from_slice(front);
    }

    let mut slots: Vec<Option<I>> = population.into_iter().map(Some).collect();
    selected
        .into_iter()
        .map(|i| slots[i].take().expect("each index selected once"))
        .collect()
}

/// Indices of the `mu` best members by (rank asc, sparsity desc); ties keep
/// input order.
pub fn select_elites<T: Scalar, I: Evaluated<T>>(population: &[I], mu: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| population[a].fitness().crowded_cmp(population[b].fitness()));
    order.truncate(mu);
    order
}

/// Draws `k` members uniformly with replacement and returns the index of the
/// best one. Equal contestants resolve to the lower index.
pub fn tournament_select<T: Scalar, I: Evaluated<T>, R: Rng + ?Sized>(population: &[I], k: usize, rng: &mut R) -> usize {
    assert!(!population.is_empty(), "tournament over an empty population");
    let mut best = rng.gen_range(0..population.len());
    for _ in 1..k {
        let challenger = rng.gen_range(0..population.len());
        let ord = population[challenger]
            .fitness()
            .crowded_cmp(population[best].fitness())
            .then(challenger.cmp(&best));
        if ord == Ordering::Less {
            best = challenger;
        }
    }
    best
}
