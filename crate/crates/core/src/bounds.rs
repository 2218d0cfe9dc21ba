//! Running per-objective extremes used to normalize objective vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::Objectives;

/// Running envelope of every objective vector observed during a run.
///
/// Starts with `max_p = 0` and `min_p = upper`, where `upper` is a per-objective
/// value far above anything the problem produces, so the first observation
/// collapses both ends onto it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds<T> {
    pub max_p: Objectives<T>,
    pub min_p: Objectives<T>,
    observations: usize,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(m: usize, upper: &Objectives<T>) -> Result<Self> {
        if upper.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: upper.dim(),
            });
        }
        if m == 0 {
            return Err(Error::InvalidArgument("at least one objective required".into()));
        }
        if upper.iter().any(|u| *u <= T::zero()) {
            return Err(Error::InvalidArgument("upper bounds must be positive".into()));
        }
        Ok(Self {
            max_p: Objectives::zeros(m),
            min_p: upper.clone(),
            observations: 0,
        })
    }

    /// Bounds spanning exactly `[lo, hi]`, as if both corners had been observed.
    pub fn from_extremes(lo: Objectives<T>, hi: Objectives<T>) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                found: hi.dim(),
            });
        }
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(Error::InvalidArgument("lower corner exceeds upper corner".into()));
        }
        Ok(Self {
            max_p: hi,
            min_p: lo,
            observations: 2,
        })
    }

    /// Identity normalization on the unit hypercube.
    pub fn unit(m: usize) -> Self {
        Self {
            max_p: Objectives::from_vec_unchecked(vec![T::one(); m]),
            min_p: Objectives::zeros(m),
            observations: 2,
        }
    }

    pub fn dim(&self) -> usize {
        self.max_p.dim()
    }

    pub fn observations(&self) -> usize {
        self.observations
    }

    /// Folds one observation into the envelope.
    pub fn update(&mut self, f: &[T]) -> Result<()> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: f.len(),
            });
        }
        if let Some(index) = f.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        for ((hi, lo), &v) in self
            .max_p
            .as_mut_slice()
            .iter_mut()
            .zip(self.min_p.as_mut_slice().iter_mut())
            .zip(f)
        {
            *hi = hi.max(v);
            *lo = lo.min(v);
        }
        self.observations += 1;
        Ok(())
    }

    pub fn updated(mut self, f: &[T]) -> Result<Self> {
        self.update(f)?;
        Ok(self)
    }

    /// Writes the normalized form of `f` into `out`. A degenerate axis maps to 0.
    pub fn normalize_into(&self, f: &[T], out: &mut [T]) {
        debug_assert_eq!(f.len(), self.dim());
        for i in 0..f.len() {
            let lo = self.min_p[i];
            let span = self.max_p[i] - lo;
            out[i] = if span > T::zero() { (f[i] - lo) / span } else { T::zero() };
        }
    }

    pub fn normalize(&self, f: &[T]) -> Objectives<T> {
        let mut out = vec![T::zero(); f.len()];
        self.normalize_into(f, &mut out);
        Objectives::from_vec_unchecked(out)
    }
}
