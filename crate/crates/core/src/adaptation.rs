//! Golden-section controller for the cone angle.
//!
//! The controller maximizes an online HDist score, one probe angle per
//! generation: once triggered it tests `θ_C`, then `θ_D`, compares the two
//! scores, shrinks the bracket by `1/φ` and starts over with fresh probes.
//! When the bracket is narrower than the tolerance the angle is frozen at the
//! bracket midpoint.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimum hypervolume gain per generation below which the search starts.
pub const HV_STALL_THRESHOLD: f64 = 1e-5;

/// Default bracket width, in degrees, at which the angle is frozen.
pub const DEFAULT_TOLERANCE: f64 = 1.0;

/// Which step the controller took this generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Still at 90°, waiting for the trigger.
    Idle,
    /// Search started; the next generation tests `θ_C`.
    Triggered,
    /// Scored `θ_C`; the next generation tests `θ_D`.
    ProbedC,
    /// Scored `θ_D` and narrowed the bracket.
    Narrowed,
    /// Bracket below tolerance; angle fixed at the midpoint.
    Frozen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenSection<T> {
    pub theta: T,
    pub theta_a: T,
    pub theta_b: T,
    pub theta_c: T,
    pub theta_d: T,
    pub hdist_c: Option<T>,
    pub hdist_d: Option<T>,
    pub testing_c: bool,
    pub active: bool,
    pub frozen: bool,
    pub min_hyp: T,
    pub max_hyp: T,
    pub min_pof: usize,
    pub max_pof: usize,
}

impl<T: Scalar> Default for GoldenSection<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> GoldenSection<T> {
    /// Inactive controller at 90° with the full `[90, 180]` bracket.
    pub fn new() -> Self {
        let lo = T::lit(90.0);
        let hi = T::lit(180.0);
        Self {
            theta: lo,
            theta_a: lo,
            theta_b: hi,
            theta_c: lo,
            theta_d: hi,
            hdist_c: None,
            hdist_d: None,
            testing_c: false,
            active: false,
            frozen: false,
            min_hyp: T::infinity(),
            max_hyp: T::neg_infinity(),
            min_pof: usize::MAX,
            max_pof: 0,
        }
    }

    pub fn phi() -> T {
        (T::lit(5.0).sqrt() + T::one()) / T::lit(2.0)
    }

    pub fn width(&self) -> T {
        self.theta_b - self.theta_a
    }

    /// Folds the current front's hypervolume and size into the running extremes.
    pub fn observe(&mut self, hyp: T, front_size: usize) {
        self.min_hyp = self.min_hyp.min(hyp);
        self.max_hyp = self.max_hyp.max(hyp);
        self.min_pof = self.min_pof.min(front_size);
        self.max_pof = self.max_pof.max(front_size);
    }

    /// Normalized hypervolume times normalized front-size complement, each
    /// clamped to `[0, 1]`. A factor whose extremes coincide scores 1.
    pub fn online_hdist(&self, hyp: T, front_size: usize) -> T {
        let hv_factor = if self.max_hyp > self.min_hyp {
            ((hyp - self.min_hyp) / (self.max_hyp - self.min_hyp)).max(T::zero()).min(T::one())
        } else {
            T::one()
        };
        let size_factor = if self.max_pof > self.min_pof {
            let num = T::from_count(self.max_pof) - T::from_count(front_size);
            let den = T::from_count(self.max_pof - self.min_pof);
            (num / den).max(T::zero()).min(T::one())
        } else {
            T::one()
        };
        hv_factor * size_factor
    }

    fn place_probes(&mut self) {
        let span = self.width() / Self::phi();
        self.theta_c = self.theta_b - span;
        self.theta_d = self.theta_a + span;
        self.theta = self.theta_c;
        self.testing_c = true;
    }

    /// Starts the search when the front is larger than `mu` or the
    /// hypervolume has stalled. Only acts while inactive; returns whether the
    /// search started.
    pub fn trigger(&mut self, front_size: usize, hv_now: T, hv_prev: T, mu: usize) -> bool {
        if self.active {
            return false;
        }
        if front_size > mu || hv_now - hv_prev < T::lit(HV_STALL_THRESHOLD) {
            self.place_probes();
            self.active = true;
            return true;
        }
        false
    }

    /// Records the score of the angle just tested and moves to the next probe.
    pub fn step(&mut self, score: T) -> Result<()> {
        if !self.active {
            return Err(Error::SearchInactive);
        }
        if self.testing_c {
            self.hdist_c = Some(score);
            self.theta = self.theta_d;
            self.testing_c = false;
        } else {
            self.hdist_d = Some(score);
            let c = self.hdist_c.unwrap_or(T::neg_infinity());
            if c > score {
                self.theta_b = self.theta_d;
            } else {
                self.theta_a = self.theta_c;
            }
            self.place_probes();
        }
        Ok(())
    }

    pub fn converged(&self, tol: T) -> bool {
        self.active && self.width() < tol
    }

    /// Fixes the angle at the bracket midpoint.
    pub fn freeze(&mut self) {
        self.theta = (self.theta_a + self.theta_b) / T::lit(2.0);
        self.frozen = true;
    }

    /// One generation of the controller.
    ///
    /// `hyp` and `front_size` describe the knee front obtained under the
    /// current angle; `hv_prev` is the previous front's hypervolume. Returns
    /// the phase reached; the angle to use next generation is `self.theta`.
    pub fn advance(&mut self, hyp: T, front_size: usize, hv_prev: T, mu: usize, tol: T) -> Phase {
        self.observe(hyp, front_size);
        if self.frozen {
            return Phase::Frozen;
        }
        if !self.active {
            return if self.trigger(front_size, hyp, hv_prev, mu) {
                Phase::Triggered
            } else {
                Phase::Idle
            };
        }
        let score = self.online_hdist(hyp, front_size);
        let was_testing_c = self.testing_c;
        self.step(score).expect("controller is active");
        if was_testing_c {
            return Phase::ProbedC;
        }
        if self.converged(tol) {
            self.freeze();
            return Phase::Frozen;
        }
        Phase::Narrowed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Gs = GoldenSection<f64>;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    fn with_extremes(hyp: (f64, f64), pof: (usize, usize)) -> Gs {
        let mut g = Gs::new();
        g.observe(hyp.0, pof.0);
        g.observe(hyp.1, pof.1);
        g
    }

    #[test]
    fn online_hdist_examples() {
        let g = with_extremes((0.2, 0.8), (2, 12));
        assert_eq!(g.online_hdist(0.8, 2), 1.0);
        assert_eq!(g.online_hdist(0.2, 5), 0.0);
        assert!(close(g.online_hdist(0.5, 7), 0.25, 1e-12));
    }

    #[test]
    fn online_hdist_degenerate_factors_score_one() {
        let mut g = Gs::new();
        g.observe(0.4, 3);
        assert_eq!(g.online_hdist(0.4, 3), 1.0);
        g.observe(0.4, 9);
        assert_eq!(g.online_hdist(0.4, 3), 1.0);
        assert!(close(g.online_hdist(0.4, 6), 0.5, 1e-12));
    }

    #[test]
    fn online_hdist_is_clamped() {
        let g = with_extremes((0.2, 0.8), (2, 12));
        assert_eq!(g.online_hdist(0.9, 1), 1.0);
        assert_eq!(g.online_hdist(0.1, 20), 0.0);
    }

    #[test]
    fn trigger_places_golden_probes() {
        let mut g = Gs::new();
        assert!(g.trigger(50, 0.5, 0.4, 10));
        assert!(g.active && g.testing_c);
        assert!(close(g.theta_c, 124.376_941, 1e-6));
        assert!(close(g.theta_d, 145.623_059, 1e-6));
        assert_eq!(g.theta, g.theta_c);
    }

    #[test]
    fn no_trigger_when_small_and_improving() {
        let mut g = Gs::new();
        assert!(!g.trigger(5, 0.51, 0.50, 10));
        assert!(!g.active);
        assert_eq!(g.theta, 90.0);
    }

    #[test]
    fn size_above_mu_triggers_regardless_of_hv() {
        let mut g = Gs::new();
        assert!(g.trigger(11, 0.9, 0.1, 10));
        let mut g = Gs::new();
        assert!(!g.trigger(10, 0.9, 0.1, 10));
    }

    #[test]
    fn stalled_hv_triggers() {
        let mut g = Gs::new();
        assert!(g.trigger(3, 0.5, 0.5, 10));
    }

    #[test]
    fn step_while_inactive_is_rejected() {
        let mut g = Gs::new();
        assert_eq!(g.step(0.3), Err(Error::SearchInactive));
    }

    #[test]
    fn c_better_shrinks_from_above() {
        let mut g = Gs::new();
        g.trigger(50, 0.0, 0.0, 10);
        let d = g.theta_d;
        g.step(0.6).unwrap();
        assert_eq!(g.theta, d);
        assert!(!g.testing_c);
        g.step(0.4).unwrap();
        assert_eq!(g.theta_a, 90.0);
        assert!(close(g.theta_b, 145.623_059, 1e-6));
        let expected_c = g.theta_b - (g.theta_b - 90.0) / Gs::phi();
        assert!(close(g.theta_c, expected_c, 1e-12));
        assert!(close(g.theta_c, 111.246, 1e-3));
        assert_eq!(g.theta, g.theta_c);
        assert!(g.testing_c);
    }

    #[test]
    fn d_better_shrinks_from_below() {
        let mut g = Gs::new();
        g.trigger(50, 0.0, 0.0, 10);
        let c = g.theta_c;
        g.step(0.4).unwrap();
        g.step(0.6).unwrap();
        assert_eq!(g.theta_a, c);
        assert_eq!(g.theta_b, 180.0);
    }

    #[test]
    fn width_shrinks_by_inverse_phi_per_pair() {
        let mut g = Gs::new();
        g.trigger(50, 0.0, 0.0, 10);
        for k in 1..=12 {
            let w = g.width();
            g.step(0.1 * k as f64).unwrap();
            assert_eq!(g.width(), w);
            g.step(0.05 * k as f64).unwrap();
            assert!(close(g.width() / w, 1.0 / Gs::phi(), 1e-12));
            assert!(g.theta_a < g.theta_c && g.theta_c < g.theta_d && g.theta_d < g.theta_b);
        }
    }

    #[test]
    fn convergence_and_midpoint_freeze() {
        let mut g = Gs::new();
        assert!(!g.converged(1.0));
        g.active = true;
        assert!(!g.converged(1.0));
        g.theta_a = 134.2;
        g.theta_b = 134.9;
        assert!(g.converged(1.0));
        g.freeze();
        assert!(close(g.theta, 134.55, 1e-12));
    }

    #[test]
    fn convergence_after_closed_form_pair_count() {
        // 90 / phi^k < 1 first holds at k = 10
        let phi = Gs::phi();
        let k_star = (1..).find(|&k| 90.0 / phi.powi(k) < 1.0).unwrap();
        assert_eq!(k_star, 10);
        let mut g = Gs::new();
        g.trigger(50, 0.0, 0.0, 10);
        let mut pairs = 0;
        while !g.converged(1.0) {
            g.step(1.0).unwrap();
            g.step(0.0).unwrap();
            pairs += 1;
        }
        assert_eq!(pairs, k_star);
    }

    #[test]
    fn advance_runs_the_whole_cycle() {
        let mut g = Gs::new();
        assert_eq!(g.advance(0.5, 3, 0.2, 10, 1.0), Phase::Idle);
        assert_eq!(g.theta, 90.0);
        assert_eq!(g.advance(0.6, 30, 0.5, 10, 1.0), Phase::Triggered);
        assert_eq!(g.advance(0.55, 4, 0.6, 10, 1.0), Phase::ProbedC);
        assert_eq!(g.advance(0.5, 2, 0.55, 10, 1.0), Phase::Narrowed);
        let mut last = Phase::Narrowed;
        for _ in 0..40 {
            last = g.advance(0.5, 2, 0.5, 10, 1.0);
        }
        assert_eq!(last, Phase::Frozen);
        assert!(g.frozen && g.width() < 1.0);
        assert!(g.min_hyp <= g.max_hyp && g.min_pof <= g.max_pof);
    }
}
