//! Score post-processing shared by every detector: contamination thresholds,
//! binary labels, probability conversion and column standardization.
//!
//! Scores are oriented so that larger always means more anomalous.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;

pub const DEFAULT_CONTAMINATION: f64 = 0.1;

pub(crate) fn check_contamination(contamination: f64) -> Result<()> {
    if contamination > 0.0 && contamination <= 0.5 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "contamination must be in (0, 0.5], got {contamination}"
        )))
    }
}

/// Linear-interpolation percentile of `values`, `q` in [0, 1].
pub fn percentile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("percentile of an empty vector"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!(
            "quantile must be in [0, 1], got {q}"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    if lo == hi || sorted[lo] == sorted[hi] {
        return Ok(sorted[lo]);
    }
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// The `1 - contamination` quantile of the train scores.
pub fn threshold_from_scores(scores: &[f64], contamination: f64) -> Result<f64> {
    check_contamination(contamination)?;
    if scores.is_empty() {
        return Err(Error::invalid("cannot threshold an empty score vector"));
    }
    percentile(scores, 1.0 - contamination)
}

/// 1 where `score > threshold`, strictly.
pub fn labels_from_scores(scores: &[f64], threshold: f64) -> Vec<u8> {
    scores.iter().map(|&s| u8::from(s > threshold)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbaMethod {
    /// Min-max scaling against the train score range.
    Linear,
    /// Gaussian scaling through the error function.
    Unify,
}

pub fn proba_linear(scores: &[f64], train_min: f64, train_max: f64) -> Vec<f64> {
    let range = train_max - train_min;
    if range <= 0.0 {
        return vec![0.0; scores.len()];
    }
    scores
        .iter()
        .map(|&s| ((s - train_min) / range).clamp(0.0, 1.0))
        .collect()
}

pub fn proba_unify(scores: &[f64], mean: f64, std: f64) -> Vec<f64> {
    if std <= 0.0 {
        return vec![0.0; scores.len()];
    }
    let scale = std * std::f64::consts::SQRT_2;
    scores
        .iter()
        .map(|&s| libm::erf((s - mean) / scale).max(0.0))
        .collect()
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Standardizes `values` with externally supplied statistics; a zero
/// `std` maps everything to 0.
pub fn standardize_with(values: &[f64], mean: f64, std: f64) -> Vec<f64> {
    if std > 0.0 {
        values.iter().map(|v| (v - mean) / std).collect()
    } else {
        vec![0.0; values.len()]
    }
}

/// Z-scores each column with its own population statistics.
pub fn zscore_standardize(matrix: &ScoreMatrix) -> ScoreMatrix {
    let columns: Vec<Vec<f64>> = (0..matrix.cols())
        .map(|j| {
            let col = matrix.column(j);
            let (mean, std) = mean_std(&col);
            standardize_with(&col, mean, std)
        })
        .collect();
    ScoreMatrix::from_columns(&columns).expect("standardized columns keep their shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn threshold_examples() {
        let s: Vec<f64> = (1..=10).map(f64::from).collect();
        assert!((threshold_from_scores(&s, 0.2).unwrap() - 8.2).abs() < 1e-12);
        assert_eq!(threshold_from_scores(&[0.0, 1.0], 0.5).unwrap(), 0.5);
        for c in [0.01, 0.1, 0.5] {
            assert_eq!(threshold_from_scores(&[5.0, 5.0, 5.0], c).unwrap(), 5.0);
        }
    }

    #[test]
    fn threshold_errors() {
        assert!(threshold_from_scores(&[], 0.1)
            .unwrap_err()
            .is_argument_error());
        assert!(threshold_from_scores(&[1.0], 0.0).is_err());
        assert!(threshold_from_scores(&[1.0], 0.51).is_err());
    }

    #[test]
    fn label_examples() {
        assert_eq!(labels_from_scores(&[1.0, 2.0, 3.0], 2.0), vec![0, 0, 1]);
        assert_eq!(labels_from_scores(&[8.2, 9.0, 10.0], 8.2), vec![0, 1, 1]);
        assert!(labels_from_scores(&[], 0.0).is_empty());
    }

    #[test]
    fn constant_scores_flag_nothing() {
        let s = vec![3.0; 50];
        let t = threshold_from_scores(&s, 0.1).unwrap();
        assert!(labels_from_scores(&s, t).iter().all(|&l| l == 0));
    }

    #[test]
    fn proba_linear_examples() {
        assert_eq!(
            proba_linear(&[5.0, 12.0, -1.0], 0.0, 10.0),
            vec![0.5, 1.0, 0.0]
        );
        assert_eq!(proba_linear(&[5.0], 3.0, 3.0), vec![0.0]);
    }

    #[test]
    fn proba_unify_examples() {
        let (mean, std) = (2.0, 0.5);
        let p = proba_unify(&[mean, mean + std * 2f64.sqrt(), mean - 100.0], mean, std);
        assert_eq!(p[0], 0.0);
        // erf(1) from its Maclaurin series
        let erf1: f64 = (0..30)
            .map(|n| {
                let fact: f64 = (1..=n).map(f64::from).product();
                (-1f64).powi(n) / (fact * f64::from(2 * n + 1))
            })
            .sum::<f64>()
            * 2.0
            / std::f64::consts::PI.sqrt();
        assert!((p[1] - erf1).abs() < 1e-12);
        assert!((p[1] - 0.8427).abs() < 1e-4);
        assert_eq!(p[2], 0.0);
        assert_eq!(proba_unify(&[9.0], 1.0, 0.0), vec![0.0]);
    }

    #[test]
    fn zscore_examples() {
        let m = ScoreMatrix::from_columns(&[vec![1.0, 2.0, 3.0], vec![4.0, 4.0, 4.0]]).unwrap();
        let z = zscore_standardize(&m);
        let c0 = z.column(0);
        let expect = 1.0 / (2.0f64 / 3.0).sqrt();
        assert!((c0[0] + expect).abs() < 1e-12 && c0[1].abs() < 1e-12);
        assert!((c0[2] - 1.2247).abs() < 1e-4);
        assert_eq!(z.column(1), vec![0.0; 3]);
        let m = ScoreMatrix::from_columns(&[vec![-1.0, 1.0]]).unwrap();
        assert_eq!(zscore_standardize(&m).column(0), vec![-1.0, 1.0]);
    }

    proptest! {
        #[test]
        fn probabilities_are_monotone(
            mut s in prop::collection::vec(-1e3f64..1e3, 2..40),
            lo in -10.0f64..0.0, width in 0.0f64..20.0,
            mean in -5.0f64..5.0, std in 0.0f64..5.0,
        ) {
            s.sort_by(f64::total_cmp);
            for p in [proba_linear(&s, lo, lo + width), proba_unify(&s, mean, std)] {
                prop_assert!(p.windows(2).all(|w| w[0] <= w[1]));
                prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }

        #[test]
        fn labels_invariant_under_increasing_transform(
            s in prop::collection::vec((-400i32..400).prop_map(|v| f64::from(v) / 8.0), 1..40),
            t in (-400i32..400).prop_map(|v| f64::from(v) / 8.0),
        ) {
            // exact on this grid, so strictly increasing in floating point too
            let f = |x: f64| x * x * x + 2.0 * x + 1.0;
            let mapped: Vec<f64> = s.iter().map(|&x| f(x)).collect();
            prop_assert_eq!(labels_from_scores(&s, t), labels_from_scores(&mapped, f(t)));
        }

        #[test]
        fn label_count_matches_contamination(
            raw in prop::collection::btree_set(-100_000i64..100_000, 10..300),
            c in 0.01f64..0.5,
        ) {
            let s: Vec<f64> = raw.into_iter().map(|v| v as f64 / 7.0).collect();
            let t = threshold_from_scores(&s, c).unwrap();
            let flagged = labels_from_scores(&s, t).iter().filter(|&&l| l == 1).count();
            let expected = (c * s.len() as f64).round();
            prop_assert!((flagged as f64 - expected).abs() <= 1.0);
        }

        #[test]
        fn zscore_is_idempotent(cols in prop::collection::vec(
            prop::collection::vec(-1e3f64..1e3, 5), 1..4)) {
            let m = ScoreMatrix::from_columns(&cols).unwrap();
            let once = zscore_standardize(&m);
            let twice = zscore_standardize(&once);
            for j in 0..m.cols() {
                let (_, std) = mean_std(&m.column(j));
                if std > 1e-6 {
                    for (a, b) in once.column(j).iter().zip(twice.column(j)) {
                        prop_assert!((a - b).abs() < 1e-9);
                    }
                }
            }
        }
    }
}
