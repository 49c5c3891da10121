//! Local outlier factor.
//!
//! `reach(a, b) = max(kdist(b), d(a, b))`, `lrd(a) = 1 / mean reach(a, .)`
//! over the k neighbors of `a`, and `LOF(a) = mean(lrd(nb) / lrd(a))`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, Target};
use crate::neighbors::{NeighborIndex, NeighborResult, SearchStrategy};

/// Density assigned when the mean reachability distance collapses to zero
/// (duplicates). Also bounds the density of near-duplicates.
pub const LRD_CAP: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct LofModel {
    k: usize,
    index: NeighborIndex,
    k_distances: Vec<f64>,
    lrd: Vec<f64>,
    train_scores: Vec<f64>,
}

impl LofModel {
    pub fn fit(train: DataMatrix, k: usize, strategy: SearchStrategy) -> Result<Self> {
        if k == 0 || k >= train.rows() {
            return Err(Error::invalid(format!(
                "lof requires 1 <= k < {} train rows, got k={k}",
                train.rows()
            )));
        }
        let index = NeighborIndex::new(train, strategy);
        let neighbors = index.query_self(k)?;
        let k_distances: Vec<f64> = neighbors.iter().map(|nb| nb.distances[k - 1]).collect();
        let lrd: Vec<f64> = neighbors
            .par_iter()
            .map(|nb| local_reachability_density(nb, &k_distances))
            .collect();
        let train_scores = neighbors
            .par_iter()
            .zip(&lrd)
            .map(|(nb, &own)| factor(nb, own, &lrd))
            .collect();
        Ok(Self {
            k,
            index,
            k_distances,
            lrd,
            train_scores,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn train(&self) -> &DataMatrix {
        self.index.points()
    }

    pub fn k_distances(&self) -> &[f64] {
        &self.k_distances
    }

    pub fn lrd(&self) -> &[f64] {
        &self.lrd
    }

    pub fn score(&self, target: Target<'_>) -> Result<Vec<f64>> {
        match target {
            Target::Train => Ok(self.train_scores.clone()),
            Target::Points(q) => {
                let neighbors = self.index.query_batch(q, self.k)?;
                Ok(neighbors
                    .par_iter()
                    .map(|nb| {
                        let own = local_reachability_density(nb, &self.k_distances);
                        factor(nb, own, &self.lrd)
                    })
                    .collect())
            }
        }
    }
}

fn local_reachability_density(nb: &NeighborResult, k_distances: &[f64]) -> f64 {
    let total: f64 = nb
        .indices
        .iter()
        .zip(&nb.distances)
        .map(|(&j, &d)| k_distances[j].max(d))
        .sum();
    let mean_reach = total / nb.indices.len() as f64;
    if mean_reach > 0.0 {
        (1.0 / mean_reach).min(LRD_CAP)
    } else {
        LRD_CAP
    }
}

fn factor(nb: &NeighborResult, own_lrd: f64, lrd: &[f64]) -> f64 {
    nb.indices.iter().map(|&j| lrd[j] / own_lrd).sum::<f64>() / nb.indices.len() as f64
}

pub fn lof_scores(train: &DataMatrix, target: Target<'_>, k: usize) -> Result<Vec<f64>> {
    LofModel::fit(train.clone(), k, SearchStrategy::KdTree)?.score(target)
}
