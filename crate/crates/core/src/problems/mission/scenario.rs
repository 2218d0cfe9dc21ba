//! Mission scenarios and a seeded generator for Table-I-style instance specs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side of the square operating area, km.
pub const AREA_KM: f64 = 100.0;

/// Largest fleet the genome's bitmask encoding supports.
pub const MAX_UAVS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sensor {
    Camera,
    Infrared,
    Radar,
}

impl Sensor {
    pub const ALL: [Sensor; 3] = [Sensor::Camera, Sensor::Infrared, Sensor::Radar];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub position: [f64; 2],
    pub duration_min: f64,
    pub multi_uav: bool,
    pub required_sensor: Sensor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Uav {
    pub base: [f64; 2],
    pub speed_kmh: f64,
    pub fuel_capacity_l: f64,
    pub fuel_rate_lph: f64,
    pub cost_rate_per_h: f64,
    pub sensors: Vec<Sensor>,
}

impl Uav {
    pub fn carries(&self, s: Sensor) -> bool {
        self.sensors.contains(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gcs {
    pub capacity: usize,
}

/// Extra route length between two tasks caused by a no-fly zone. Symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NfzPenalty {
    pub tasks: [usize; 2],
    pub extra_km: f64,
}

/// Task `before` must finish before task `after` starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dependency {
    pub before: usize,
    pub after: usize,
}

/// Instance counts of one mission row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissionSpec {
    pub tasks: usize,
    pub multi_uav_tasks: usize,
    pub uavs: usize,
    pub gcss: usize,
    pub nfzs: usize,
    pub dependencies: usize,
}

impl MissionSpec {
    pub const fn new(tasks: usize, multi_uav_tasks: usize, uavs: usize, gcss: usize, nfzs: usize, dependencies: usize) -> Self {
        Self { tasks, multi_uav_tasks, uavs, gcss, nfzs, dependencies }
    }

    /// Row `n` (1-based) of the benchmark mission table.
    pub fn table_row(n: usize) -> Result<Self> {
        MISSIONS
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("mission row {n} not in 1..={}", MISSIONS.len())))
    }
}

/// Tasks, multi-UAV tasks, UAVs, GCSs, NFZs, time dependencies.
pub const MISSIONS: [MissionSpec; 12] = [
    MissionSpec::new(5, 0, 3, 1, 0, 0),
    MissionSpec::new(6, 1, 3, 1, 1, 0),
    MissionSpec::new(6, 1, 4, 2, 2, 1),
    MissionSpec::new(7, 1, 5, 2, 1, 2),
    MissionSpec::new(8, 2, 5, 2, 3, 1),
    MissionSpec::new(9, 2, 5, 2, 0, 2),
    MissionSpec::new(9, 2, 6, 2, 2, 2),
    MissionSpec::new(10, 2, 6, 2, 3, 3),
    MissionSpec::new(11, 3, 6, 2, 3, 2),
    MissionSpec::new(12, 3, 7, 3, 0, 2),
    MissionSpec::new(12, 3, 8, 3, 2, 3),
    MissionSpec::new(13, 4, 7, 3, 4, 4),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MissionScenario {
    pub tasks: Vec<Task>,
    pub uavs: Vec<Uav>,
    pub gcss: Vec<Gcs>,
    pub penalties: Vec<NfzPenalty>,
    pub dependencies: Vec<Dependency>,
}

impl MissionScenario {
    pub fn spec(&self) -> MissionSpec {
        MissionSpec {
            tasks: self.tasks.len(),
            multi_uav_tasks: self.tasks.iter().filter(|t| t.multi_uav).count(),
            uavs: self.uavs.len(),
            gcss: self.gcss.len(),
            nfzs: self.penalties.len(),
            dependencies: self.dependencies.len(),
        }
    }

    /// Extra km on the leg between tasks `a` and `b`.
    pub fn penalty(&self, a: usize, b: usize) -> f64 {
        self.penalties
            .iter()
            .filter(|p| p.tasks == [a, b] || p.tasks == [b, a])
            .map(|p| p.extra_km)
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let (nt, nu) = (self.tasks.len(), self.uavs.len());
        if nt == 0 || nu == 0 || self.gcss.is_empty() {
            return Err(Error::Schema("scenario needs at least one task, UAV and GCS".into()));
        }
        if nu > MAX_UAVS {
            return Err(Error::Schema(format!("at most {MAX_UAVS} UAVs supported, got {nu}")));
        }
        let finite_pos = |p: &[f64; 2]| p.iter().all(|v| v.is_finite());
        for (i, t) in self.tasks.iter().enumerate() {
            if !finite_pos(&t.position) || !(t.duration_min >= 0.0 && t.duration_min.is_finite()) {
                return Err(Error::Schema(format!("task {i} has invalid position or duration")));
            }
            if !self.uavs.iter().any(|u| u.carries(t.required_sensor)) {
                return Err(Error::Schema(format!("no UAV carries the sensor task {i} requires")));
            }
        }
        for (i, u) in self.uavs.iter().enumerate() {
            let positive = [u.speed_kmh, u.fuel_capacity_l, u.fuel_rate_lph]
                .iter()
                .all(|v| *v > 0.0 && v.is_finite());
            if !finite_pos(&u.base) || !positive || !(u.cost_rate_per_h >= 0.0 && u.cost_rate_per_h.is_finite()) {
                return Err(Error::Schema(format!("UAV {i} has invalid parameters")));
            }
        }
        for p in &self.penalties {
            if p.tasks[0] >= nt || p.tasks[1] >= nt || p.tasks[0] == p.tasks[1] || !(p.extra_km >= 0.0) {
                return Err(Error::Schema(format!("invalid no-fly-zone penalty {:?}", p.tasks)));
            }
        }
        for d in &self.dependencies {
            if d.before >= nt || d.after >= nt || d.before == d.after {
                return Err(Error::Schema(format!("invalid dependency {} -> {}", d.before, d.after)));
            }
        }
        if has_cycle(nt, &self.dependencies) {
            return Err(Error::Schema("dependency graph has a cycle".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Self = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    /// Draws a scenario with exactly the counts of `spec`.
    pub fn generate(spec: &MissionSpec, seed: u64) -> Result<Self> {
        let MissionSpec { tasks: nt, multi_uav_tasks, uavs: nu, gcss: ng, nfzs, dependencies } = *spec;
        if nt == 0 || nu == 0 || ng == 0 {
            return Err(Error::InvalidArgument("tasks, UAVs and GCSs must be at least 1".into()));
        }
        if nu > MAX_UAVS {
            return Err(Error::InvalidArgument(format!("at most {MAX_UAVS} UAVs supported")));
        }
        if multi_uav_tasks > nt {
            return Err(Error::InvalidArgument("more multi-UAV tasks than tasks".into()));
        }
        let pairs = nt * (nt - 1) / 2;
        if nfzs > pairs {
            return Err(Error::InvalidArgument(format!("{nfzs} no-fly zones but only {pairs} task pairs")));
        }
        if dependencies > pairs {
            return Err(Error::InvalidArgument(format!(
                "{dependencies} dependencies exceed the {pairs} acyclic task pairs"
            )));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let point = |rng: &mut ChaCha8Rng| [rng.gen_range(0.0..AREA_KM), rng.gen_range(0.0..AREA_KM)];

        let mut multi: Vec<usize> = (0..nt).collect();
        multi.shuffle(&mut rng);
        multi.truncate(multi_uav_tasks);
        let tasks: Vec<Task> = (0..nt)
            .map(|i| Task {
                position: point(&mut rng),
                duration_min: rng.gen_range(5.0..60.0),
                multi_uav: multi.contains(&i),
                required_sensor: *Sensor::ALL.choose(&mut rng).unwrap(),
            })
            .collect();

        let mut uavs: Vec<Uav> = (0..nu)
            .map(|_| {
                let base = point(&mut rng);
                // Faster airframes cost more per hour and burn more per hour,
                // so choosing between them trades time against cost and fuel.
                let speed_kmh: f64 = rng.gen_range(80.0..160.0);
                let scale = speed_kmh / 120.0;
                let fuel_rate_lph = 12.0 * scale.powi(2) * rng.gen_range(0.9..1.1);
                let endurance_h = rng.gen_range(4.0..8.0);
                let cost_rate_per_h = 120.0 * scale.powi(2) * rng.gen_range(0.9..1.1);
                let mut sensors: Vec<Sensor> = Sensor::ALL.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
                if sensors.is_empty() {
                    sensors.push(*Sensor::ALL.choose(&mut rng).unwrap());
                }
                Uav {
                    base,
                    speed_kmh,
                    fuel_capacity_l: fuel_rate_lph * endurance_h,
                    fuel_rate_lph,
                    cost_rate_per_h,
                    sensors,
                }
            })
            .collect();

        // Every required sensor gets enough carriers: one, or two for a
        // multi-UAV task when the fleet allows it.
        for s in Sensor::ALL {
            let needed = tasks
                .iter()
                .filter(|t| t.required_sensor == s)
                .map(|t| if t.multi_uav { 2.min(nu) } else { 1 })
                .max()
                .unwrap_or(0);
            let mut lacking: Vec<usize> = (0..nu).filter(|&u| !uavs[u].carries(s)).collect();
            lacking.shuffle(&mut rng);
            let mut carriers = nu - lacking.len();
            while carriers < needed {
                let u = lacking.pop().expect("enough UAVs to cover sensor demand");
                uavs[u].sensors.push(s);
                uavs[u].sensors.sort();
                carriers += 1;
            }
        }

        let per_gcs = nu.div_ceil(ng);
        let gcss = (0..ng)
            .map(|_| Gcs { capacity: per_gcs + rng.gen_range(0..=1) })
            .collect();

        let mut all_pairs: Vec<[usize; 2]> = (0..nt).flat_map(|a| (a + 1..nt).map(move |b| [a, b])).collect();
        all_pairs.shuffle(&mut rng);
        let penalties = all_pairs[..nfzs]
            .iter()
            .map(|&tasks| NfzPenalty { tasks, extra_km: rng.gen_range(5.0..25.0) })
            .collect();

        // Dependencies follow a random topological order, so they are acyclic.
        let mut topo: Vec<usize> = (0..nt).collect();
        topo.shuffle(&mut rng);
        all_pairs.shuffle(&mut rng);
        let dependencies = all_pairs[..dependencies]
            .iter()
            .map(|&[a, b]| {
                let (x, y) = (topo[a], topo[b]);
                Dependency { before: x, after: y }
            })
            .collect();

        let sc = Self { tasks, uavs, gcss, penalties, dependencies };
        sc.validate()?;
        Ok(sc)
    }
}

fn has_cycle(n: usize, deps: &[Dependency]) -> bool {
    let mut indegree = vec![0usize; n];
    for d in deps {
        indegree[d.after] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for d in deps.iter().filter(|d| d.before == v) {
            indegree[d.after] -= 1;
            if indegree[d.after] == 0 {
                ready.push(d.after);
            }
        }
    }
    seen < n
}
