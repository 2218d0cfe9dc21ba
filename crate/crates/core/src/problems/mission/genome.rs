//! Mission genome: the decision variables of one plan and their operators.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::scenario::{MissionScenario, Sensor};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Slow,
    Fast,
}

impl Profile {
    pub const ALL: [Profile; 2] = [Profile::Slow, Profile::Fast];

    pub fn speed_factor(self) -> f64 {
        match self {
            Profile::Slow => 0.8,
            Profile::Fast => 1.0,
        }
    }

    /// Hourly fuel burn relative to the UAV's nominal rate. Cruising slower
    /// burns less per hour and about 5% less per km.
    pub fn fuel_factor(self) -> f64 {
        match self {
            Profile::Slow => 0.76,
            Profile::Fast => 1.0,
        }
    }
}

/// One mission plan.
///
/// `assignment[t]` is a bitmask of the UAVs performing task `t`: a single bit
/// for ordinary tasks, any non-empty subset for multi-UAV tasks. Each UAV
/// visits its tasks in increasing `order_key`, which is a permutation of
/// `0..tasks`. `task_profile[t]` is the profile of the leg flown into task
/// `t`; `return_profile[u]` that of UAV `u`'s flight back to base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissionGenome {
    pub assignment: Vec<u32>,
    pub order_key: Vec<usize>,
    pub gcs: Vec<usize>,
    pub sensor: Vec<Sensor>,
    pub task_profile: Vec<Profile>,
    pub return_profile: Vec<Profile>,
}

impl MissionGenome {
    pub fn uavs_of(&self, task: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.assignment[task];
        (0..32).filter(move |u| mask & (1 << u) != 0)
    }

    pub fn validate(&self, sc: &MissionScenario) -> Result<()> {
        let (nt, nu) = (sc.tasks.len(), sc.uavs.len());
        let lens = [
            (self.assignment.len(), nt),
            (self.order_key.len(), nt),
            (self.sensor.len(), nt),
            (self.task_profile.len(), nt),
            (self.gcs.len(), nu),
            (self.return_profile.len(), nu),
        ];
        if lens.iter().any(|(a, b)| a != b) {
            return Err(Error::Schema("genome length does not match scenario".into()));
        }
        let full = if nu == 32 { u32::MAX } else { (1u32 << nu) - 1 };
        for (t, &mask) in self.assignment.iter().enumerate() {
            let ok = mask != 0 && mask & !full == 0 && (sc.tasks[t].multi_uav || mask.count_ones() == 1);
            if !ok {
                return Err(Error::Schema(format!("task {t} has invalid UAV assignment {mask:#b}")));
            }
        }
        let mut seen = vec![false; nt];
        for &k in &self.order_key {
            if k >= nt || std::mem::replace(&mut seen[k], true) {
                return Err(Error::Schema("order keys are not a permutation".into()));
            }
        }
        if self.gcs.iter().any(|&g| g >= sc.gcss.len()) {
            return Err(Error::Schema("GCS index out of range".into()));
        }
        Ok(())
    }

    pub fn random(sc: &MissionScenario, rng: &mut dyn RngCore) -> Self {
        let nt = sc.tasks.len();
        let nu = sc.uavs.len();
        let mut order_key: Vec<usize> = (0..nt).collect();
        for i in (1..nt).rev() {
            order_key.swap(i, rng.gen_range(0..=i));
        }
        Self {
            assignment: (0..nt).map(|t| random_mask(sc, t, rng)).collect(),
            order_key,
            gcs: (0..nu).map(|_| rng.gen_range(0..sc.gcss.len())).collect(),
            sensor: (0..nt).map(|_| Sensor::ALL[rng.gen_range(0..3)]).collect(),
            task_profile: (0..nt).map(|_| random_profile(rng)).collect(),
            return_profile: (0..nu).map(|_| random_profile(rng)).collect(),
        }
    }

    /// Uniform exchange of every allele; the order-key permutation moves as a whole.
    pub fn crossover(&self, other: &Self, sc: &MissionScenario, rng: &mut dyn RngCore) -> Result<(Self, Self)> {
        self.validate(sc)?;
        other.validate(sc)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        exchange(&mut a.assignment, &mut b.assignment, rng);
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut a.order_key, &mut b.order_key);
        }
        exchange(&mut a.gcs, &mut b.gcs, rng);
        exchange(&mut a.sensor, &mut b.sensor, rng);
        exchange(&mut a.task_profile, &mut b.task_profile, rng);
        exchange(&mut a.return_profile, &mut b.return_profile, rng);
        Ok((a, b))
    }

    /// Resamples each allele with probability `p`; an order key selected for
    /// mutation swaps with another position.
    pub fn mutate(&self, sc: &MissionScenario, p: f64, rng: &mut dyn RngCore) -> Self {
        let mut g = self.clone();
        let nt = g.order_key.len();
        for t in 0..nt {
            if rng.gen_bool(p) {
                g.assignment[t] = random_mask(sc, t, rng);
            }
        }
        if nt > 1 {
            for t in 0..nt {
                if rng.gen_bool(p) {
                    let mut other = rng.gen_range(0..nt - 1);
                    if other >= t {
                        other += 1;
                    }
                    g.order_key.swap(t, other);
                }
            }
        }
        for v in g.gcs.iter_mut() {
            if rng.gen_bool(p) {
                *v = rng.gen_range(0..sc.gcss.len());
            }
        }
        for v in g.sensor.iter_mut() {
            if rng.gen_bool(p) {
                *v = Sensor::ALL[rng.gen_range(0..3)];
            }
        }
        for v in g.task_profile.iter_mut().chain(g.return_profile.iter_mut()) {
            if rng.gen_bool(p) {
                *v = random_profile(rng);
            }
        }
        g
    }
}

fn random_mask(sc: &MissionScenario, task: usize, rng: &mut dyn RngCore) -> u32 {
    let nu = sc.uavs.len() as u32;
    if sc.tasks[task].multi_uav {
        let full = if nu == 32 { u32::MAX } else { (1u32 << nu) - 1 };
        rng.gen_range(1..=full)
    } else {
        1 << rng.gen_range(0..nu)
    }
}

fn random_profile(rng: &mut dyn RngCore) -> Profile {
    Profile::ALL[rng.gen_range(0..2)]
}

fn exchange<T>(a: &mut [T], b: &mut [T], rng: &mut dyn RngCore) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        if rng.gen_bool(0.5) {
            std::mem::swap(x, y);
        }
    }
}
