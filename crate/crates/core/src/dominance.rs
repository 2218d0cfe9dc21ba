//! Pareto dominance, cone domination, knee fronts and front ranking.
//!
//! Cone domination compares solutions through the linear forms
//!
//! ```text
//! Ω_i(f) = f_i + Σ_{j≠i} a_ij f_j
//! ```
//!
//! evaluated on normalized objectives. Only symmetric cones are exposed: every
//! off-diagonal `a_ij` equals `tan((θ - 90°) / 2)` for a single cone angle θ.
//! With per-face angles `θ_ij = atan(a_ij)` a general matrix would give the
//! `f_i`-`f_j` face an opening of `90 + θ_ij + θ_ji`; the symmetric choice
//! makes every face open at exactly θ. θ = 90° is Pareto dominance and
//! θ = 180° compares plain objective sums.
//!
//! Ω is evaluated as `(1 - a)·f_i + a·Σ_j f_j`, which is algebraically the
//! same form and is exact at both ends of the angle range: `Ω_i = f_i` at 90°
//! and `Ω_i = Σ_j f_j` (identical for every `i`) at 180°.

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{Evaluated, Fitness};

/// Symmetric cone: the angle in degrees and its matrix coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeParams<T> {
    theta: T,
    coeff: T,
}

impl<T: Scalar> ConeParams<T> {
    pub fn new(theta: T) -> Result<Self> {
        Ok(Self {
            theta,
            coeff: cone_coefficient(theta)?,
        })
    }

    /// Pareto dominance.
    pub fn pareto() -> Self {
        Self {
            theta: T::lit(90.0),
            coeff: T::zero(),
        }
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn coeff(&self) -> T {
        self.coeff
    }
}

/// Off-diagonal entry `tan((θ - 90) / 2)` of the symmetric cone matrix.
///
/// Returns exactly 0 at 90° and exactly 1 at 180°.
pub fn cone_coefficient<T: Scalar>(theta: T) -> Result<T> {
    let lo = T::lit(90.0);
    let hi = T::lit(180.0);
    if !(theta >= lo && theta <= hi) {
        return Err(Error::AngleOutOfRange(theta.as_f64()));
    }
    if theta == lo {
        return Ok(T::zero());
    }
    if theta == hi {
        return Ok(T::one());
    }
    Ok(((theta - lo) / T::lit(2.0)).to_radians().tan())
}

/// `Ω_i` of a normalized objective vector (0-based axis).
pub fn cone_value<T: Scalar>(x_norm: &[T], i: usize, cone: &ConeParams<T>) -> T {
    let sum: T = x_norm.iter().copied().sum();
    omega(x_norm[i], sum, cone.coeff)
}

#[inline]
fn omega<T: Scalar>(xi: T, sum: T, coeff: T) -> T {
    (T::one() - coeff) * xi + coeff * sum
}

/// True iff `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn pareto_dominates<T: Scalar>(a: &[T], b: &[T]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Cone domination of `a` over `b` after normalizing both with `bounds`.
///
/// Constraint counts are ignored here; see [`constrained_cone_dominates`].
pub fn cone_dominates<T: Scalar>(a: &Fitness<T>, b: &Fitness<T>, cone: &ConeParams<T>, bounds: &Bounds<T>) -> bool {
    let x = bounds.normalize(&a.objectives);
    let y = bounds.normalize(&b.objectives);
    let mut strict = false;
    for i in 0..x.dim() {
        let (cx, cy) = (cone_value(&x, i, cone), cone_value(&y, i, cone));
        if cx > cy {
            return false;
        }
        if cx < cy {
            strict = true;
        }
    }
    strict
}

/// Feasibility first, then cone domination between equally feasible solutions.
pub fn constrained_cone_dominates<T: Scalar>(
    a: &Fitness<T>,
    b: &Fitness<T>,
    cone: &ConeParams<T>,
    bounds: &Bounds<T>,
) -> bool {
    match a.constraints_satisfied.cmp(&b.constraints_satisfied) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => cone_dominates(a, b, cone, bounds),
    }
}

/// Precomputed Ω images of a population, so each pairwise test is a plain
/// component-wise comparison. Comparing fixed vectors keeps the relation
/// exactly transitive, which the incremental front filter relies on.
struct ConeImages<T> {
    m: usize,
    levels: Vec<usize>,
    omega: Vec<T>,
}

impl<T: Scalar> ConeImages<T> {
    fn build<I: Evaluated<T>>(items: &[I], cone: &ConeParams<T>, bounds: &Bounds<T>) -> Self {
        let m = bounds.dim();
        let mut images = vec![T::zero(); items.len() * m];
        let mut levels = Vec::with_capacity(items.len());
        let mut norm = vec![T::zero(); m];
        for (k, item) in items.iter().enumerate() {
            let fit = item.fitness();
            levels.push(fit.constraints_satisfied);
            bounds.normalize_into(&fit.objectives, &mut norm);
            let sum: T = norm.iter().copied().sum();
            for (dst, &xi) in images[k * m..(k + 1) * m].iter_mut().zip(&norm) {
                *dst = omega(xi, sum, cone.coeff);
            }
        }
        Self { m, levels, omega: images }
    }

    fn row(&self, k: usize) -> &[T] {
        &self.omega[k * self.m..(k + 1) * self.m]
    }

    fn dominates(&self, a: usize, b: usize) -> bool {
        match self.levels[a].cmp(&self.levels[b]) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => pareto_dominates(self.row(a), self.row(b)),
        }
    }

    /// Non-dominated members of `subset`, in ascending index order.
    fn front_of(&self, subset: &[usize]) -> Vec<usize> {
        let mut front: Vec<usize> = Vec::new();
        'candidates: for &i in subset {
            let mut k = 0;
            while k < front.len() {
                let j = front[k];
                if self.dominates(j, i) {
                    continue 'candidates;
                }
                if self.dominates(i, j) {
                    front.swap_remove(k);
                } else {
                    k += 1;
                }
            }
            front.push(i);
        }
        front.sort_unstable();
        front
    }
}

/// Indices of the members not cone-dominated by any other member.
///
/// Feasibility is layered in front of the cone test, so with constrained
/// problems only the best-feasibility members can appear.
pub fn knee_front<T: Scalar, I: Evaluated<T>>(items: &[I], cone: &ConeParams<T>, bounds: &Bounds<T>) -> Vec<usize> {
    if items.is_empty() {
        return Vec::new();
    }
    let images = ConeImages::build(items, cone, bounds);
    let all: Vec<usize> = (0..items.len()).collect();
    images.front_of(&all)
}

/// Population partitioned into successive non-cone-dominated levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedFronts {
    /// `fronts[r]` holds the indices of rank `r + 1`, ascending.
    pub fronts: Vec<Vec<usize>>,
}

impl RankedFronts {
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    /// 1-based rank of every index.
    pub fn ranks(&self, n: usize) -> Vec<usize> {
        let mut ranks = vec![0; n];
        for (r, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = r + 1;
            }
        }
        ranks
    }
}

/// Peels knee fronts off the population until it is exhausted.
pub fn rank_fronts<T: Scalar, I: Evaluated<T>>(items: &[I], cone: &ConeParams<T>, bounds: &Bounds<T>) -> RankedFronts {
    let images = ConeImages::build(items, cone, bounds);
    let mut remaining: Vec<usize> = (0..items.len()).collect();
    let mut fronts = Vec::new();
    let mut taken = vec![false; items.len()];
    while !remaining.is_empty() {
        let front = images.front_of(&remaining);
        for &i in &front {
            taken[i] = true;
        }
        remaining.retain(|&i| !taken[i]);
        fronts.push(front);
    }
    RankedFronts { fronts }
}

/// [`rank_fronts`], also writing each member's rank into its fitness.
pub fn assign_front_ranks<T: Scalar, I: Evaluated<T>>(
    items: &mut [I],
    cone: &ConeParams<T>,
    bounds: &Bounds<T>,
) -> RankedFronts {
    let ranked = rank_fronts(items, cone, bounds);
    for (r, front) in ranked.fronts.iter().enumerate() {
        for &i in front {
            items[i].fitness_mut().rank = Some(r + 1);
        }
    }
    ranked
}
