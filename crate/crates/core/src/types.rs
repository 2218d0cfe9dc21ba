//! Objective vectors, fitness records and individuals.

use std::cmp::Ordering;
use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Values of the `m` objectives of one solution. All objectives are minimized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Objectives<T>(Vec<T>);

impl<T: Scalar> Objectives<T> {
    /// Builds an objective vector, rejecting NaN and infinite entries.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    /// Builds an objective vector without the finiteness check.
    pub fn from_vec_unchecked(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![T::zero(); m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.0
    }
}

impl<T> Deref for Objectives<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> AsRef<[T]> for Objectives<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

impl<T> Index<usize> for Objectives<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for Objectives<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Self::new(values)
    }
}

/// Evaluation result of an individual: objectives, constraint count, and the
/// rank/sparsity annotations written by environmental selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Fitness<T> {
    pub objectives: Objectives<T>,
    pub constraints_satisfied: usize,
    pub constraints_total: usize,
    /// Non-domination level, starting at 1. `None` until ranked.
    pub rank: Option<usize>,
    /// Crowding-style density estimate; larger is sparser. Infinite values
    /// are written as `null`.
    #[serde(with = "infinite_as_null")]
    pub sparsity: T,
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::Scalar;

    pub fn serialize<T: Scalar + Serialize, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > T::zero() {
            s.serialize_none()
        } else {
            s.serialize_some(v)
        }
    }

    pub fn deserialize<'de, T: Scalar + Deserialize<'de>, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        Ok(Option::<T>::deserialize(d)?.unwrap_or_else(T::infinity))
    }
}

impl<T: Scalar> Fitness<T> {
    pub fn new(objectives: Objectives<T>, constraints_satisfied: usize, constraints_total: usize) -> Result<Self> {
        if constraints_satisfied > constraints_total {
            return Err(Error::InvalidArgument(format!(
                "{constraints_satisfied} constraints satisfied out of {constraints_total}"
            )));
        }
        Ok(Self {
            objectives,
            constraints_satisfied,
            constraints_total,
            rank: None,
            sparsity: T::zero(),
        })
    }

    /// Fitness of an unconstrained problem.
    pub fn unconstrained(objectives: Objectives<T>) -> Self {
        Self {
            objectives,
            constraints_satisfied: 0,
            constraints_total: 0,
            rank: None,
            sparsity: T::zero(),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.constraints_satisfied == self.constraints_total
    }

    /// Crowded-comparison order: lower rank first, then higher sparsity.
    /// Unranked fitness sorts after every ranked one.
    pub fn crowded_cmp(&self, other: &Self) -> Ordering {
        let ra = self.rank.unwrap_or(usize::MAX);
        let rb = other.rank.unwrap_or(usize::MAX);
        ra.cmp(&rb).then_with(|| {
            other
                .sparsity
                .partial_cmp(&self.sparsity)
                .unwrap_or(Ordering::Equal)
        })
    }
}

/// Feasibility-first comparison applied ahead of any dominance test.
///
/// `Less` means `a` is preferred, `Greater` means `b` is preferred. `Equal`
/// means the constraint counts do not separate the two and dominance decides;
/// this covers two feasible solutions and two infeasible ones with the same
/// number of satisfied constraints.
pub fn feasibility_compare<T: Scalar>(a: &Fitness<T>, b: &Fitness<T>) -> Result<Ordering> {
    if a.constraints_total != b.constraints_total {
        return Err(Error::ConstraintMismatch(a.constraints_total, b.constraints_total));
    }
    Ok(b.constraints_satisfied.cmp(&a.constraints_satisfied))
}

/// A genome together with its fitness once evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "G: Serialize, T: Scalar + Serialize",
    deserialize = "G: Deserialize<'de>, T: Scalar + Deserialize<'de>"
))]
pub struct Individual<G, T> {
    pub genome: G,
    pub fitness: Option<Fitness<T>>,
}

impl<G, T> Individual<G, T> {
    pub fn new(genome: G) -> Self {
        Self { genome, fitness: None }
    }

    pub fn evaluated(genome: G, fitness: Fitness<T>) -> Self {
        Self {
            genome,
            fitness: Some(fitness),
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.fitness.is_some()
    }
}

pub type Population<G, T> = Vec<Individual<G, T>>;

/// Anything that carries an evaluated [`Fitness`].
///
/// Dominance, ranking and selection work on slices of such items and report
/// results as indices, so they never need to know the genome type.
pub trait Evaluated<T> {
    fn fitness(&self) -> &Fitness<T>;
    fn fitness_mut(&mut self) -> &mut Fitness<T>;

    fn objectives(&self) -> &Objectives<T> {
        &self.fitness().objectives
    }
}

impl<T> Evaluated<T> for Fitness<T> {
    fn fitness(&self) -> &Fitness<T> {
        self
    }

    fn fitness_mut(&mut self) -> &mut Fitness<T> {
        self
    }
}

impl<G, T> Evaluated<T> for Individual<G, T> {
    fn fitness(&self) -> &Fitness<T> {
        self.fitness.as_ref().expect("individual must be evaluated")
    }

    fn fitness_mut(&mut self) -> &mut Fitness<T> {
        self.fitness.as_mut().expect("individual must be evaluated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(sat: usize, total: usize) -> Fitness<f64> {
        Fitness::new(Objectives::new(vec![0.0, 0.0]).unwrap(), sat, total).unwrap()
    }

    #[test]
    fn rejects_non_finite_objectives() {
        assert_eq!(
            Objectives::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert!(Objectives::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn infinite_sparsity_survives_json() {
        let mut f = fit(1, 2);
        f.sparsity = f64::INFINITY;
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"sparsity\":null"));
        assert_eq!(serde_json::from_str::<Fitness<f64>>(&text).unwrap(), f);
        f.sparsity = 0.25;
        assert_eq!(serde_json::from_str::<Fitness<f64>>(&serde_json::to_string(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn feasible_beats_infeasible() {
        assert_eq!(feasibility_compare(&fit(5, 5), &fit(4, 5)).unwrap(), Ordering::Less);
        assert_eq!(feasibility_compare(&fit(4, 5), &fit(5, 5)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn infeasible_ordered_by_count() {
        assert_eq!(feasibility_compare(&fit(3, 5), &fit(2, 5)).unwrap(), Ordering::Less);
    }

    #[test]
    fn two_feasible_defer_to_dominance() {
        assert_eq!(feasibility_compare(&fit(5, 5), &fit(5, 5)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn mismatched_totals_rejected() {
        assert_eq!(
            feasibility_compare(&fit(1, 5), &fit(1, 4)),
            Err(Error::ConstraintMismatch(5, 4))
        );
    }

    #[test]
    fn satisfied_cannot_exceed_total() {
        assert!(Fitness::new(Objectives::new(vec![0.0]).unwrap(), 3, 2).is_err());
    }

    #[test]
    fn crowded_cmp_orders_rank_then_sparsity() {
        let mut a = fit(0, 0);
        let mut b = fit(0, 0);
        a.rank = Some(1);
        b.rank = Some(2);
        b.sparsity = f64::INFINITY;
        assert_eq!(a.crowded_cmp(&b), Ordering::Less);
        b.rank = Some(1);
        assert_eq!(a.crowded_cmp(&b), Ordering::Greater);
    }
}
