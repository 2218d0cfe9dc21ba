//! Decoding a mission genome into routes, a schedule and seven objectives.
//!
//! Objectives, all minimized: cost, makespan (h), risk (%), UAVs used,
//! fuel (l), flight time (h), distance (km).

use super::genome::MissionGenome;
use super::scenario::MissionScenario;
use crate::error::Result;
use crate::types::{Fitness, Objectives};

pub const NUM_OBJECTIVES: usize = 7;

/// One UAV's stop at a task.
#[derive(Clone, Debug)]
struct Visit {
    uav: usize,
    task: usize,
    /// Flight time of the leg into this task, h.
    travel_h: f64,
    /// Time spent working on the task, h.
    work_h: f64,
}

/// Number of constraints checked for a scenario.
pub fn constraints_total(sc: &MissionScenario) -> usize {
    let multi = sc.tasks.iter().filter(|t| t.multi_uav).count();
    sc.tasks.len() + sc.gcss.len() + sc.uavs.len() + sc.dependencies.len() + multi
}

pub fn evaluate(g: &MissionGenome, sc: &MissionScenario) -> Result<Fitness<f64>> {
    Ok(evaluate_with_dependencies(g, sc)?.0)
}

/// Evaluates `g` and also reports, per scenario dependency, whether the plan honors it.
pub fn evaluate_with_dependencies(g: &MissionGenome, sc: &MissionScenario) -> Result<(Fitness<f64>, Vec<bool>)> {
    g.validate(sc)?;
    let nu = sc.uavs.len();

    let mut routes: Vec<Vec<usize>> = vec![Vec::new(); nu];
    let mut tasks_by_key: Vec<usize> = (0..sc.tasks.len()).collect();
    tasks_by_key.sort_by_key(|&t| g.order_key[t]);
    for &t in &tasks_by_key {
        for u in g.uavs_of(t) {
            routes[u].push(t);
        }
    }

    let mut visits: Vec<Vec<Visit>> = vec![Vec::new(); nu];
    let mut return_h = vec![0.0; nu];
    let (mut cost, mut fuel_total, mut hours_total, mut distance_total) = (0.0, 0.0, 0.0, 0.0);
    let mut risk_sum = 0.0;
    let mut used = 0usize;
    let mut fuel_ok = vec![true; nu];

    for (u, route) in routes.iter().enumerate() {
        if route.is_empty() {
            continue;
        }
        used += 1;
        let uav = &sc.uavs[u];
        let (mut km, mut hours, mut fuel) = (0.0, 0.0, 0.0);
        let mut at = uav.base;
        let mut prev: Option<usize> = None;
        for &t in route {
            let task = &sc.tasks[t];
            let mut d = dist(at, task.position);
            if let Some(p) = prev {
                d += sc.penalty(p, t);
            }
            let profile = g.task_profile[t];
            let travel_h = d / (uav.speed_kmh * profile.speed_factor());
            let work_h = task.duration_min / 60.0 / g.assignment[t].count_ones() as f64;
            km += d;
            hours += travel_h + work_h;
            fuel += uav.fuel_rate_lph * (profile.fuel_factor() * travel_h + work_h);
            visits[u].push(Visit { uav: u, task: t, travel_h, work_h });
            at = task.position;
            prev = Some(t);
        }
        let d = dist(at, uav.base);
        let profile = g.return_profile[u];
        let back_h = d / (uav.speed_kmh * profile.speed_factor());
        km += d;
        hours += back_h;
        fuel += uav.fuel_rate_lph * profile.fuel_factor() * back_h;
        return_h[u] = back_h;

        cost += hours * uav.cost_rate_per_h;
        fuel_total += fuel;
        hours_total += hours;
        distance_total += km;
        risk_sum += (100.0 * fuel / uav.fuel_capacity_l).min(100.0);
        fuel_ok[u] = fuel <= uav.fuel_capacity_l;
    }

    let (makespan, enforced) = schedule(&visits, &return_h, sc);

    let mut satisfied = 0usize;
    for (t, task) in sc.tasks.iter().enumerate() {
        let sensor_ok = g.sensor[t] == task.required_sensor
            && g.uavs_of(t).all(|u| sc.uavs[u].carries(task.required_sensor));
        satisfied += sensor_ok as usize;
        if task.multi_uav {
            satisfied += (g.assignment[t].count_ones() >= 2) as usize;
        }
    }
    for gi in 0..sc.gcss.len() {
        let load = (0..nu).filter(|&u| g.gcs[u] == gi && !routes[u].is_empty()).count();
        satisfied += (load <= sc.gcss[gi].capacity) as usize;
    }
    satisfied += fuel_ok.iter().filter(|ok| **ok).count();
    satisfied += enforced.iter().filter(|ok| **ok).count();

    let risk = risk_sum / used as f64;
    let objectives = Objectives::new(vec![
        cost,
        makespan,
        risk,
        used as f64,
        fuel_total,
        hours_total,
        distance_total,
    ])?;
    Ok((Fitness::new(objectives, satisfied, constraints_total(sc))?, enforced))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Times every visit and returns the makespan plus, per dependency, whether
/// it could be honored.
///
/// Visits form a graph with an edge from each stop to the next stop of the
/// same UAV and, per dependency `a -> b`, from every visit of `a` to every
/// visit of `b`. A dependency on a cycle of that graph contradicts the routes
/// and is reported violated; the remaining dependencies make an acyclic graph
/// whose longest path gives the schedule. A visit starts once the UAV has
/// arrived and every honored predecessor task has been completed.
fn schedule(visits: &[Vec<Visit>], return_h: &[f64], sc: &MissionScenario) -> (f64, Vec<bool>) {
    let flat: Vec<&Visit> = visits.iter().flatten().collect();
    let n = flat.len();
    let mut of_task: Vec<Vec<usize>> = vec![Vec::new(); sc.tasks.len()];
    for (i, v) in flat.iter().enumerate() {
        of_task[v.task].push(i);
    }
    // next[i]: following stop on the same route
    let mut next: Vec<Option<usize>> = vec![None; n];
    for i in 1..n {
        if flat[i].uav == flat[i - 1].uav {
            next[i - 1] = Some(i);
        }
    }

    let successors = |i: usize, deps: &[(usize, usize)], out: &mut Vec<usize>| {
        out.clear();
        out.extend(next[i]);
        for &(a, b) in deps {
            if flat[i].task == a {
                out.extend(&of_task[b]);
            }
        }
    };

    let all: Vec<(usize, usize)> = sc.dependencies.iter().map(|d| (d.before, d.after)).collect();
    let reach = |from: &[usize], to_task: usize| -> bool {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = from.to_vec();
        let mut buf = Vec::new();
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            if flat[i].task == to_task {
                return true;
            }
            successors(i, &all, &mut buf);
            stack.extend(buf.iter().copied().filter(|&j| !seen[j]));
        }
        false
    };
    let enforced: Vec<bool> = all.iter().map(|&(a, b)| !reach(&of_task[b], a)).collect();
    let kept: Vec<(usize, usize)> = all.iter().zip(&enforced).filter(|(_, ok)| **ok).map(|(d, _)| *d).collect();

    let mut indegree = vec![0usize; n];
    let mut buf = Vec::new();
    for i in 0..n {
        successors(i, &kept, &mut buf);
        for &j in &buf {
            indegree[j] += 1;
        }
    }
    // ready[i]: earliest start imposed by predecessors
    let mut ready = vec![0.0f64; n];
    let mut end = vec![0.0f64; n];
    let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    for i in 0..n {
        let first_of_route = i == 0 || flat[i - 1].uav != flat[i].uav;
        if first_of_route {
            ready[i] = flat[i].travel_h;
        }
    }
    let mut done = 0;
    while let Some(i) = queue.pop() {
        done += 1;
        end[i] = ready[i] + flat[i].work_h;
        successors(i, &kept, &mut buf);
        for &j in &buf {
            let earliest = if next[i] == Some(j) { end[i] + flat[j].travel_h } else { end[i] };
            ready[j] = ready[j].max(earliest);
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push(j);
            }
        }
    }
    debug_assert_eq!(done, n, "honored dependencies must leave the visit graph acyclic");

    let mut makespan = 0.0f64;
    for i in 0..n {
        if next[i].is_none() {
            makespan = makespan.max(end[i] + return_h[flat[i].uav]);
        }
    }
    (makespan, enforced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::mission::genome::Profile;
    use crate::problems::mission::scenario::{Dependency, Gcs, MissionSpec, Sensor, Task, Uav, MISSIONS};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn uav(base: [f64; 2], sensors: Vec<Sensor>) -> Uav {
        Uav {
            base,
            speed_kmh: 100.0,
            fuel_capacity_l: 50.0,
            fuel_rate_lph: 10.0,
            cost_rate_per_h: 100.0,
            sensors,
        }
    }

    fn task(position: [f64; 2], duration_min: f64, required_sensor: Sensor) -> Task {
        Task { position, duration_min, multi_uav: false, required_sensor }
    }

    fn single(sc: &MissionScenario, assignment: Vec<u32>, order_key: Vec<usize>) -> MissionGenome {
        let nt = sc.tasks.len();
        MissionGenome {
            assignment,
            order_key,
            gcs: vec![0; sc.uavs.len()],
            sensor: sc.tasks.iter().map(|t| t.required_sensor).collect(),
            task_profile: vec![Profile::Fast; nt],
            return_profile: vec![Profile::Fast; sc.uavs.len()],
        }
    }

    #[test]
    fn one_task_out_and_back() {
        let sc = MissionScenario {
            tasks: vec![task([10.0, 0.0], 0.0, Sensor::Camera)],
            uavs: vec![uav([0.0, 0.0], vec![Sensor::Camera])],
            gcss: vec![Gcs { capacity: 1 }],
            penalties: vec![],
            dependencies: vec![],
        };
        let f = evaluate(&single(&sc, vec![1], vec![0]), &sc).unwrap();
        let o = f.objectives.as_slice();
        assert!((o[6] - 20.0).abs() < 1e-12);
        assert!((o[5] - 0.2).abs() < 1e-12);
        assert!((o[4] - 2.0).abs() < 1e-12);
        assert!((o[0] - 20.0).abs() < 1e-12);
        assert_eq!(o[3], 1.0);
        assert!((o[1] - 0.2).abs() < 1e-12);
        assert!((o[2] - 4.0).abs() < 1e-12);
        assert!(f.is_feasible());
    }

    fn two_task_scenario() -> MissionScenario {
        MissionScenario {
            tasks: vec![task([10.0, 0.0], 30.0, Sensor::Camera), task([0.0, 10.0], 60.0, Sensor::Radar)],
            uavs: vec![
                uav([0.0, 0.0], vec![Sensor::Camera]),
                uav([0.0, 0.0], vec![Sensor::Camera, Sensor::Radar]),
            ],
            gcss: vec![Gcs { capacity: 2 }],
            penalties: vec![],
            dependencies: vec![Dependency { before: 0, after: 1 }],
        }
    }

    #[test]
    fn dependency_wait_delays_makespan() {
        let sc = two_task_scenario();
        // UAV 0 does task 0 (0.1 h out, 0.5 h work), UAV 1 waits for it before task 1
        let g = single(&sc, vec![1, 2], vec![0, 1]);
        let f = evaluate(&g, &sc).unwrap();
        assert!((f.objectives[1] - (0.6 + 1.0 + 0.1)).abs() < 1e-12);
        assert!(f.is_feasible());

        let mut free = sc.clone();
        free.dependencies.clear();
        let f = evaluate(&g, &free).unwrap();
        assert!((f.objectives[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn contradicted_dependency_is_counted_violated() {
        let sc = two_task_scenario();
        // one UAV visiting task 1 before task 0
        let g = single(&sc, vec![2, 2], vec![1, 0]);
        let f = evaluate(&g, &sc).unwrap();
        assert_eq!(f.constraints_satisfied, f.constraints_total - 1);
        let g = single(&sc, vec![2, 2], vec![0, 1]);
        assert!(evaluate(&g, &sc).unwrap().is_feasible());
    }

    #[test]
    fn missing_sensor_costs_exactly_one_constraint() {
        let sc = two_task_scenario();
        let bad = single(&sc, vec![1, 1], vec![0, 1]);
        let f = evaluate(&bad, &sc).unwrap();
        assert_eq!(f.constraints_satisfied + 1, f.constraints_total);
        let fixed = single(&sc, vec![1, 2], vec![0, 1]);
        assert_eq!(evaluate(&fixed, &sc).unwrap().constraints_satisfied, f.constraints_satisfied + 1);
    }

    #[test]
    fn multi_uav_task_splits_duration() {
        let mut sc = two_task_scenario();
        sc.dependencies.clear();
        sc.tasks[0].multi_uav = true;
        let solo = evaluate(&single(&sc, vec![1, 2], vec![0, 1]), &sc).unwrap();
        let pair = evaluate(&single(&sc, vec![3, 2], vec![0, 1]), &sc).unwrap();
        assert_eq!(solo.constraints_satisfied + 1, pair.constraints_satisfied);
        // the work is shared, so only UAV 1's detour via task 0 adds flight time:
        // 10 + 10 sqrt 2 + 10 km instead of 20 km at 100 km/h
        let detour_h = 0.1 * 2f64.sqrt();
        assert!((pair.objectives[5] - (solo.objectives[5] + detour_h)).abs() < 1e-12);
    }

    #[test]
    fn slow_profile_trades_time_for_fuel() {
        let sc = two_task_scenario();
        let fast = single(&sc, vec![2, 2], vec![0, 1]);
        let mut slow = fast.clone();
        slow.task_profile = vec![Profile::Slow; 2];
        slow.return_profile = vec![Profile::Slow; 2];
        let (f, s) = (evaluate(&fast, &sc).unwrap(), evaluate(&slow, &sc).unwrap());
        assert!(s.objectives[5] > f.objectives[5]);
        assert!(s.objectives[4] < f.objectives[4]);
        assert_eq!(s.objectives[6], f.objectives[6]);
    }

    #[test]
    fn gcs_and_fuel_constraints() {
        let mut sc = two_task_scenario();
        sc.dependencies.clear();
        sc.gcss[0].capacity = 1;
        let g = single(&sc, vec![1, 2], vec![0, 1]);
        assert_eq!(evaluate(&g, &sc).unwrap().constraints_satisfied, constraints_total(&sc) - 1);
        sc.gcss[0].capacity = 2;
        sc.uavs[1].fuel_capacity_l = 1.0;
        assert_eq!(evaluate(&g, &sc).unwrap().constraints_satisfied, constraints_total(&sc) - 1);
    }

    #[test]
    fn random_genomes_give_finite_consistent_objectives() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (i, spec) in MISSIONS.iter().enumerate() {
            let sc = MissionScenario::generate(spec, i as u64).unwrap();
            for _ in 0..50 {
                let g = MissionGenome::random(&sc, &mut rng);
                let f = evaluate(&g, &sc).unwrap();
                assert_eq!(f, evaluate(&g, &sc).unwrap());
                let o = f.objectives.as_slice();
                assert!(o.iter().all(|v| v.is_finite() && *v >= 0.0));
                assert!(o[3] >= 1.0 && o[5] > 0.0 && o[6] > 0.0);
                assert!(o[1] <= o[5] + 1e-9 || sc.dependencies.len() > 0);
                assert!(f.constraints_satisfied <= f.constraints_total);
            }
        }
    }

    #[test]
    fn fuel_is_rate_weighted_flight_time() {
        let sc = MissionScenario::generate(&MissionSpec::new(6, 0, 1, 1, 2, 2), 8).unwrap();
        let u = &sc.uavs[0];
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let mut g = MissionGenome::random(&sc, &mut rng);
            g.task_profile = vec![Profile::Fast; 6];
            g.return_profile = vec![Profile::Fast];
            let fast = evaluate(&g, &sc).unwrap();
            let expected = u.fuel_rate_lph * fast.objectives[5];
            assert!((fast.objectives[4] - expected).abs() <= 1e-9 * expected);

            // one slow leg: 25% longer at 76% of the hourly burn
            g.task_profile[0] = Profile::Slow;
            let slow = evaluate(&g, &sc).unwrap();
            let leg_h = (slow.objectives[5] - fast.objectives[5]) / 0.25;
            let expected = fast.objectives[4] + u.fuel_rate_lph * leg_h * (1.25 * 0.76 - 1.0);
            assert!((slow.objectives[4] - expected).abs() <= 1e-9 * expected);
        }
    }

    /// Dropping a dependency that the genome honors cannot delay the mission.
    #[test]
    fn removing_honored_dependency_never_increases_makespan() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let sc = MissionScenario::generate(&MISSIONS[11], 4).unwrap();
        let mut checked = 0;
        for _ in 0..2000 {
            let g = MissionGenome::random(&sc, &mut rng);
            let full = evaluate(&g, &sc).unwrap();
            for d in 0..sc.dependencies.len() {
                let mut less = sc.clone();
                less.dependencies.remove(d);
                let reduced = evaluate(&g, &less).unwrap();
                let (_, honored) = evaluate_with_dependencies(&g, &sc).unwrap();
                if honored.iter().all(|ok| *ok) {
                    assert!(reduced.objectives[1] <= full.objectives[1] + 1e-12);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}
