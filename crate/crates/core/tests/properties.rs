use kneeopt::dominance::pareto_dominates;
use kneeopt::metrics::hdist_offline;
use kneeopt::{cone_dominates, hypervolume, knee_front, rank_fronts, rank_sum_test, Bounds, ConeParams, Fitness, Objectives};
use proptest::prelude::*;

fn fit(v: &[f64]) -> Fitness<f64> {
    Fitness::unconstrained(Objectives::new(v.to_vec()).unwrap())
}

fn population(max_m: usize, max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2..=max_m).prop_flat_map(move |m| prop::collection::vec(prop::collection::vec(0.0..1.0f64, m), 1..=max_n))
}

fn bounds_of(pts: &[Vec<f64>]) -> Bounds<f64> {
    let m = pts[0].len();
    pts.iter().fold(Bounds::new(m, &Objectives::new(vec![10.0; m]).unwrap()).unwrap(), |b, p| b.updated(p).unwrap())
}

/// Union volume by inclusion and exclusion over all non-empty subsets.
fn inclusion_exclusion(pts: &[Vec<f64>], reference: &[f64]) -> f64 {
    let n = pts.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut corner = vec![f64::NEG_INFINITY; reference.len()];
        for (k, p) in pts.iter().enumerate() {
            if mask & (1 << k) != 0 {
                for (c, v) in corner.iter_mut().zip(p) {
                    *c = c.max(*v);
                }
            }
        }
        let vol: f64 = corner.iter().zip(reference).map(|(c, r)| (r - c).max(0.0)).product();
        total += if mask.count_ones() % 2 == 1 { vol } else { -vol };
    }
    total
}

proptest! {
    #[test]
    fn cone_relation_is_a_strict_order(pts in population(5, 12), theta in 90.0..=180.0f64) {
        let b = bounds_of(&pts);
        let cone = ConeParams::new(theta).unwrap();
        let f: Vec<_> = pts.iter().map(|p| fit(p)).collect();
        for x in &f {
            prop_assert!(!cone_dominates(x, x, &cone, &b));
            for y in &f {
                prop_assert!(!(cone_dominates(x, y, &cone, &b) && cone_dominates(y, x, &cone, &b)));
                for z in &f {
                    if cone_dominates(x, y, &cone, &b) && cone_dominates(y, z, &cone, &b) {
                        prop_assert!(cone_dominates(x, z, &cone, &b));
                    }
                }
            }
        }
    }

    #[test]
    fn wider_cone_dominates_more(pts in population(4, 10), t1 in 90.0..=180.0f64, t2 in 90.0..=180.0f64) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let b = bounds_of(&pts);
        let (c1, c2) = (ConeParams::new(lo).unwrap(), ConeParams::new(hi).unwrap());
        let f: Vec<_> = pts.iter().map(|p| fit(p)).collect();
        for x in &f {
            for y in &f {
                if cone_dominates(x, y, &c1, &b) {
                    prop_assert!(cone_dominates(x, y, &c2, &b));
                }
            }
        }
    }

    #[test]
    fn knee_front_is_exactly_the_undominated_set(pts in population(7, 30), theta in 90.0..=180.0f64) {
        let b = bounds_of(&pts);
        let cone = ConeParams::new(theta).unwrap();
        let f: Vec<_> = pts.iter().map(|p| fit(p)).collect();
        let front = knee_front(&f, &cone, &b);
        for i in 0..f.len() {
            let dominated = (0..f.len()).any(|j| cone_dominates(&f[j], &f[i], &cone, &b));
            prop_assert_eq!(front.contains(&i), !dominated);
        }
    }

    #[test]
    fn pareto_cone_matches_pareto_dominance(pts in population(5, 15)) {
        let b = bounds_of(&pts);
        let f: Vec<_> = pts.iter().map(|p| fit(p)).collect();
        for (x, px) in f.iter().zip(&pts) {
            for (y, py) in f.iter().zip(&pts) {
                prop_assert_eq!(
                    cone_dominates(x, y, &ConeParams::pareto(), &b),
                    pareto_dominates(&b.normalize(px), &b.normalize(py))
                );
            }
        }
    }

    #[test]
    fn fronts_partition_and_each_later_member_is_dominated(pts in population(4, 25), theta in 90.0..=180.0f64) {
        let b = bounds_of(&pts);
        let cone = ConeParams::new(theta).unwrap();
        let f: Vec<_> = pts.iter().map(|p| fit(p)).collect();
        let ranked = rank_fronts(&f, &cone, &b);
        let mut all: Vec<usize> = ranked.fronts.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..f.len()).collect::<Vec<_>>());
        for (r, front) in ranked.fronts.iter().enumerate() {
            for &i in front {
                for later in &ranked.fronts[r..] {
                    for &j in later {
                        prop_assert!(!cone_dominates(&f[j], &f[i], &cone, &b));
                    }
                }
                if r > 0 {
                    prop_assert!(ranked.fronts[r - 1].iter().any(|&j| cone_dominates(&f[j], &f[i], &cone, &b)));
                }
            }
        }
    }

    #[test]
    fn hypervolume_matches_inclusion_exclusion(pts in population(4, 7)) {
        let reference = vec![1.0; pts[0].len()];
        let exact = hypervolume(&pts, &reference);
        let oracle = inclusion_exclusion(&pts, &reference);
        prop_assert!((exact - oracle).abs() <= 1e-12, "{} vs {}", exact, oracle);
    }

    #[test]
    fn hypervolume_grows_with_new_points(pts in population(5, 12), extra in prop::collection::vec(0.0..1.0f64, 5)) {
        let m = pts[0].len();
        let reference = vec![1.0; m];
        let before = hypervolume(&pts, &reference);
        let mut more = pts.clone();
        more.push(extra[..m].to_vec());
        prop_assert!(hypervolume(&more, &reference) >= before - 1e-12);
        more.push(pts[0].clone());
        more.push(pts[0].iter().map(|v| (v + 0.1).min(1.0)).collect());
        prop_assert!((hypervolume(&more, &reference) - hypervolume(&more[..pts.len() + 1], &reference)).abs() <= 1e-12);
    }

    #[test]
    fn offline_hdist_lies_in_unit_interval(pts in population(3, 12), keep in prop::collection::vec(any::<bool>(), 12)) {
        let m = pts[0].len();
        let b = bounds_of(&pts);
        let f: Vec<_> = pts.iter().map(|p| fit(p)).collect();
        let p: Vec<Vec<f64>> = knee_front(&f, &ConeParams::pareto(), &b).into_iter().map(|i| pts[i].clone()).collect();
        let s: Vec<Vec<f64>> = p.iter().zip(&keep).filter(|(_, k)| **k).map(|(x, _)| x.clone()).collect();
        let reference = vec![1.0 + 1e-9; m];
        if hypervolume(&p, &reference) > 0.0 {
            let h = hdist_offline(&s, &p, &reference).unwrap();
            prop_assert!((0.0..1.0).contains(&h));
        }
    }

    #[test]
    fn rank_sum_is_symmetric_and_a_probability(
        a in prop::collection::vec(0u8..20, 1..25),
        b in prop::collection::vec(0u8..20, 1..25),
    ) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let p = rank_sum_test(&a, &b);
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert!((p - rank_sum_test(&b, &a)).abs() < 1e-12);
    }
}
