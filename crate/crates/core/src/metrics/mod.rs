//! Quality indicators and the statistics used to compare algorithm runs.

mod hypervolume;
mod rank_sum;
mod stats;

pub use hypervolume::hypervolume;
pub use rank_sum::{rank_sum_test, EXACT_LIMIT};
pub use stats::{front_stats, MeanStd, MetricSummary, RunMetrics, METRIC_NAMES};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Offline HDist of `s` against a reference front `p`:
/// `(#p - #s) / #p * HV(s) / HV(p)`.
///
/// The count factor saturates at 0 when `s` holds at least as many points as
/// `p`; with `s` drawn from `p` the result lies in `[0, 1)`.
pub fn hdist_offline<T: Scalar, P: AsRef<[T]>, Q: AsRef<[T]>>(s: &[P], p: &[Q], reference: &[T]) -> Result<T> {
    hdist_with_volume(s, p.len(), hypervolume(p, reference), reference)
}

/// [`hdist_offline`] with the reference front given by its size and
/// precomputed hypervolume, for scoring many fronts against one reference.
pub fn hdist_with_volume<T: Scalar, P: AsRef<[T]>>(s: &[P], p_len: usize, hv_p: T, reference: &[T]) -> Result<T> {
    if !(hv_p > T::zero()) {
        return Err(Error::InvalidArgument(
            "reference front encloses no hypervolume".into(),
        ));
    }
    let np = T::from_count(p_len);
    let ns = T::from_count(s.len());
    let count_factor = ((np - ns) / np).max(T::zero());
    Ok(count_factor * hypervolume(s, reference) / hv_p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Union of axis-aligned boxes by inclusion-exclusion over every subset.
    fn inclusion_exclusion(points: &[[f64; 2]], reference: [f64; 2]) -> f64 {
        let n = points.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            let mut corner = [f64::NEG_INFINITY; 2];
            for (i, p) in points.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    corner[0] = corner[0].max(p[0]);
                    corner[1] = corner[1].max(p[1]);
                }
            }
            let vol = (reference[0] - corner[0]).max(0.0) * (reference[1] - corner[1]).max(0.0);
            total += if mask.count_ones() % 2 == 1 { vol } else { -vol };
        }
        total
    }

    const P: [[f64; 2]; 4] = [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5], [0.25, 0.75]];

    #[test]
    fn hdist_of_reference_itself_is_zero() {
        assert_eq!(hdist_offline(&P, &P, &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn hdist_of_empty_set_is_zero() {
        let empty: [[f64; 2]; 0] = [];
        assert_eq!(hdist_offline(&empty, &P, &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn hdist_single_knee_against_four_point_front() {
        let hv_p = inclusion_exclusion(&P, [1.0, 1.0]);
        assert_eq!(hv_p, 0.3125);
        let expected = 0.75 * 0.25 / hv_p;
        let got = hdist_offline(&[[0.5, 0.5]], &P, &[1.0, 1.0]).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 0.6).abs() < 1e-12);
    }

    #[test]
    fn hdist_rejects_empty_reference_volume() {
        assert!(hdist_offline(&[[0.5, 0.5]], &[[1.0, 1.0]], &[1.0, 1.0]).is_err());
    }
}
