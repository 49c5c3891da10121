//! Histogram-based outlier score: one equal-width histogram per feature,
//! score = sum over features of `-ln(density + alpha)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HbosParams {
    pub bins: usize,
    pub alpha: f64,
    /// Fraction of a bin width outside the train range still assigned to
    /// the edge bin.
    pub tol: f64,
}

impl Default for HbosParams {
    fn default() -> Self {
        Self {
            bins: 10,
            alpha: 0.1,
            tol: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureHistogram {
    pub edges: Vec<f64>,
    pub densities: Vec<f64>,
}

impl FeatureHistogram {
    fn fit(values: &[f64], bins: usize) -> Self {
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if hi <= lo {
            return Self {
                edges: vec![lo, hi],
                densities: vec![1.0],
            };
        }
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * width).collect();
        edges.push(hi);
        let mut hist = Self {
            edges,
            densities: vec![0.0; bins],
        };
        let mut counts = vec![0usize; bins];
        for &v in values {
            counts[hist.bin_of(v)] += 1;
        }
        let n = values.len() as f64;
        hist.densities = counts.iter().map(|&c| c as f64 / (n * width)).collect();
        hist
    }

    fn bin_width(&self) -> f64 {
        (self.edges[self.edges.len() - 1] - self.edges[0]) / self.densities.len() as f64
    }

    /// Bin index for an in-range value: right-open bins, last bin closed.
    fn bin_of(&self, v: f64) -> usize {
        let interior = &self.edges[1..self.edges.len() - 1];
        interior.partition_point(|&e| e <= v)
    }

    pub fn density(&self, v: f64, tol: f64) -> f64 {
        let lo = self.edges[0];
        let hi = self.edges[self.edges.len() - 1];
        let slack = tol * self.bin_width();
        if v < lo {
            if lo - v <= slack {
                self.densities[0]
            } else {
                0.0
            }
        } else if v > hi {
            if v - hi <= slack {
                self.densities[self.densities.len() - 1]
            } else {
                0.0
            }
        } else {
            self.densities[self.bin_of(v)]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HbosState {
    pub features: Vec<FeatureHistogram>,
    pub alpha: f64,
    pub tol: f64,
}

pub fn hbos_fit(train: &DataMatrix, params: HbosParams) -> Result<HbosState> {
    if params.bins == 0 {
        return Err(Error::invalid("hbos requires at least one bin"));
    }
    if params.alpha <= 0.0 || !params.alpha.is_finite() {
        return Err(Error::invalid(format!(
            "hbos alpha must be > 0, got {}",
            params.alpha
        )));
    }
    if params.tol < 0.0 || !params.tol.is_finite() {
        return Err(Error::invalid(format!(
            "hbos tol must be >= 0, got {}",
            params.tol
        )));
    }
    let features = (0..train.cols())
        .map(|j| FeatureHistogram::fit(&train.column(j), params.bins))
        .collect();
    Ok(HbosState {
        features,
        alpha: params.alpha,
        tol: params.tol,
    })
}

pub fn hbos_scores(state: &HbosState, query: &DataMatrix) -> Result<Vec<f64>> {
    query.check_cols(state.features.len())?;
    Ok((0..query.rows())
        .into_par_iter()
        .map(|i| {
            query
                .row(i)
                .iter()
                .zip(&state.features)
                .fold(0.0, |acc, (&v, h)| {
                    acc - (h.density(v, state.tol) + state.alpha).ln()
                })
        })
        .collect())
}
