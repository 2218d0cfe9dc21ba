//! Exact hypervolume for any number of objectives (minimization).
//!
//! Points are sorted by the last objective, worst first. The volume owned by
//! point `k` and by no later point is a slab of depth `ref_last - p_k.last`
//! times an `(m-1)`-dimensional exclusive volume, because every later point
//! is at least as good as `p_k` on the last objective. The exclusive volume is
//! the box of `p_k` minus the hypervolume of the limit set
//! `{ max(p_k, p_j) : j > k }`, computed recursively. Two objectives use a
//! direct sweep.

use std::cmp::Ordering;

use crate::scalar::Scalar;

/// Lebesgue measure of the region dominated by `front` and bounded by `reference`.
///
/// Points that exceed the reference on some axis enclose nothing and are
/// skipped with a warning. Duplicated and dominated points do not change the
/// result.
pub fn hypervolume<T: Scalar, P: AsRef<[T]>>(front: &[P], reference: &[T]) -> T {
    let m = reference.len();
    assert!(m > 0, "reference point needs at least one objective");
    let mut pts: Vec<Vec<T>> = Vec::with_capacity(front.len());
    let mut dropped = 0usize;
    for p in front {
        let p = p.as_ref();
        assert_eq!(p.len(), m, "point dimension differs from reference point");
        if p.iter().zip(reference).any(|(x, r)| !(x < r)) {
            if p.iter().zip(reference).any(|(x, r)| x > r) {
                dropped += 1;
            }
            continue;
        }
        pts.push(p.to_vec());
    }
    if dropped > 0 {
        log::warn!("hypervolume: skipped {dropped} point(s) beyond the reference point");
    }
    let pts = non_dominated(pts);
    volume(pts, reference)
}

fn volume<T: Scalar>(mut pts: Vec<Vec<T>>, reference: &[T]) -> T {
    let m = reference.len();
    match (pts.len(), m) {
        (0, _) => T::zero(),
        (1, _) => box_volume(&pts[0], reference),
        (_, 1) => reference[0] - pts.iter().map(|p| p[0]).fold(T::infinity(), T::min),
        (_, 2) => sweep_2d(pts, reference),
        _ => {
            let last = m - 1;
            pts.sort_by(|a, b| b[last].partial_cmp(&a[last]).unwrap_or(Ordering::Equal));
            let sub_ref = &reference[..last];
            let mut total = T::zero();
            for k in 0..pts.len() {
                let depth = reference[last] - pts[k][last];
                let pk = &pts[k][..last];
                let limit: Vec<Vec<T>> = pts[k + 1..]
                    .iter()
                    .map(|q| pk.iter().zip(&q[..last]).map(|(a, b)| a.max(*b)).collect())
                    .collect();
                let limit = non_dominated(limit);
                let exclusive = box_volume(pk, sub_ref) - volume(limit, sub_ref);
                total = total + depth * exclusive;
            }
            total
        }
    }
}

fn box_volume<T: Scalar>(p: &[T], reference: &[T]) -> T {
    p.iter()
        .zip(reference)
        .fold(T::one(), |acc, (x, r)| acc * (*r - *x).max(T::zero()))
}

fn sweep_2d<T: Scalar>(mut pts: Vec<Vec<T>>, reference: &[T]) -> T {
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap_or(Ordering::Equal)
            .then(a[1].partial_cmp(&b[1]).unwrap_or(Ordering::Equal))
    });
    let mut area = T::zero();
    let mut best_y = reference[1];
    for i in 0..pts.len() {
        best_y = best_y.min(pts[i][1]);
        let next_x = if i + 1 < pts.len() { pts[i + 1][0] } else { reference[0] };
        area = area + (next_x - pts[i][0]) * (reference[1] - best_y);
    }
    area
}

/// Removes duplicated and weakly dominated points.
fn non_dominated<T: Scalar>(mut pts: Vec<Vec<T>>) -> Vec<Vec<T>> {
    if pts.len() < 2 {
        return pts;
    }
    let sum = |p: &Vec<T>| p.iter().copied().sum::<T>();
    pts.sort_by(|a, b| sum(a).partial_cmp(&sum(b)).unwrap_or(Ordering::Equal));
    let mut kept: Vec<Vec<T>> = Vec::with_capacity(pts.len());
    for p in pts {
        let covered = kept
            .iter()
            .any(|q| q.iter().zip(&p).all(|(a, b)| a <= b));
        if !covered {
            kept.push(p);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_boxes() {
        assert_eq!(hypervolume(&[[0.5, 0.5]], &[1.0, 1.0]), 0.25);
        assert_eq!(hypervolume(&[[0.5, 0.5, 0.5]], &[1.0, 1.0, 1.0]), 0.125);
        assert_eq!(hypervolume(&[[0.25]], &[1.0]), 0.75);
    }

    #[test]
    fn two_point_union() {
        let hv = hypervolume(&[[0.25, 0.75], [0.75, 0.25]], &[1.0, 1.0]);
        assert_eq!(hv, 0.3125);
    }

    #[test]
    fn empty_front_has_zero_volume() {
        let empty: [[f64; 2]; 0] = [];
        assert_eq!(hypervolume(&empty, &[1.0, 1.0]), 0.0);
    }

    #[test]
    fn points_beyond_reference_contribute_nothing() {
        assert_eq!(hypervolume(&[[0.5, 0.5], [1.5, 0.0]], &[1.0, 1.0]), 0.25);
        assert_eq!(hypervolume(&[[1.0, 0.0]], &[1.0, 1.0]), 0.0);
    }

    #[test]
    fn duplicates_and_dominated_points_are_ignored() {
        let base = hypervolume(&[[0.2, 0.6, 0.4], [0.6, 0.2, 0.5]], &[1.0; 3]);
        let noisy = hypervolume(
            &[[0.2, 0.6, 0.4], [0.6, 0.2, 0.5], [0.2, 0.6, 0.4], [0.7, 0.7, 0.7]],
            &[1.0; 3],
        );
        assert_eq!(base, noisy);
    }

    #[test]
    fn three_dimensional_inclusion_exclusion() {
        // two boxes of 0.5^3 overlapping in 0.5 * 0.5 * 0.25
        let hv = hypervolume(&[[0.5, 0.5, 0.0], [0.5, 0.0, 0.5]], &[1.0, 1.0, 1.0]);
        assert_eq!(hv, 0.25 + 0.25 - 0.125);
    }

    #[test]
    fn works_for_f32() {
        let hv: f32 = hypervolume(&[[0.25f32, 0.75], [0.75, 0.25]], &[1.0, 1.0]);
        assert_eq!(hv, 0.3125);
    }
}
