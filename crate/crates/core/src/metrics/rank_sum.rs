//! Two-sided Wilcoxon rank-sum (Mann-Whitney U) test.
//!
//! Ties receive midranks. Small samples use the exact permutation
//! distribution of the rank sum given those midranks; larger samples use the
//! tie-corrected normal approximation with continuity correction.

use statrs::function::erf::erfc;

/// Largest per-sample size handled by exact enumeration.
pub const EXACT_LIMIT: usize = 12;

/// Two-sided p-value for a location shift between `a` and `b`. Symmetric in
/// its arguments and always in `(0, 1]`.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "rank-sum test needs two non-empty samples");
    let doubled = doubled_midranks(a, b);
    if a.len() <= EXACT_LIMIT && b.len() <= EXACT_LIMIT {
        exact(&doubled, a.len())
    } else {
        normal(&doubled, a, b)
    }
}

/// Twice the midrank of every observation (so ties stay integral), first the
/// members of `a`, then those of `b`.
fn doubled_midranks(a: &[f64], b: &[f64]) -> Vec<u64> {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0u64; pooled.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && pooled[order[end + 1]] == pooled[order[start]] {
            end += 1;
        }
        // ranks start..=end (1-based start+1 ..= end+1), doubled midrank = (start+1)+(end+1)
        let twice_mid = (start + end + 2) as u64;
        for &k in &order[start..=end] {
            ranks[k] = twice_mid;
        }
        start = end + 1;
    }
    ranks
}

fn exact(doubled: &[u64], n1: usize) -> f64 {
    let n = doubled.len();
    let observed: u64 = doubled[..n1].iter().sum();
    let max_sum: u64 = doubled.iter().sum();
    // ways[k][s]: number of k-subsets whose doubled ranks sum to s
    let mut ways = vec![vec![0u64; max_sum as usize + 1]; n1 + 1];
    ways[0][0] = 1;
    for &r in doubled {
        let r = r as usize;
        for k in (1..=n1).rev() {
            for s in (r..=max_sum as usize).rev() {
                let add = ways[k - 1][s - r];
                if add != 0 {
                    ways[k][s] += add;
                }
            }
        }
    }
    // doubled expectation of the rank sum: n1 * (n + 1)
    let expected = (n1 * (n + 1)) as i64;
    let cut = (observed as i64 - expected).abs();
    let mut extreme = 0u64;
    let mut total = 0u64;
    for (s, &w) in ways[n1].iter().enumerate() {
        total += w;
        if (s as i64 - expected).abs() >= cut {
            extreme += w;
        }
    }
    (extreme as f64 / total as f64).min(1.0)
}

fn normal(doubled: &[u64], a: &[f64], b: &[f64]) -> f64 {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let r1: f64 = doubled[..a.len()].iter().map(|&r| r as f64 / 2.0).sum();
    let u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;

    let mut counts = std::collections::BTreeMap::new();
    for &r in doubled {
        *counts.entry(r).or_insert(0u64) += 1;
    }
    let tie_term: f64 = counts.values().map(|&t| (t * t * t - t) as f64).sum();
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u1 - mean).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
