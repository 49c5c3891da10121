//! Feature bagging: LOF on random feature subspaces, one subspace per
//! round, with the per-round scores z-standardized and then combined.
//!
//! Round `r` draws its subspace from RNG stream `r`: a size uniform in
//! `[ceil(d/2), d-1]` (the single feature when `d == 1`), then that many
//! distinct features. Query scores are standardized with the statistics of
//! the round's train scores.

use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, Target};
use crate::neighbors::SearchStrategy;
use crate::proximity::LofModel;
use crate::rng::{self, Rng};
use crate::scores::{mean_std, standardize_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BagCombine {
    Average,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureBagParams {
    pub rounds: usize,
    pub base_k: usize,
    pub combine: BagCombine,
    pub seed: u64,
}

impl Default for FeatureBagParams {
    fn default() -> Self {
        Self {
            rounds: 10,
            base_k: 10,
            combine: BagCombine::Average,
            seed: 0,
        }
    }
}

/// Draws one sorted feature subspace for a `d`-feature dataset.
pub fn sample_subspace(d: usize, rng: &mut Rng) -> Vec<usize> {
    if d <= 1 {
        return vec![0];
    }
    let lo = d.div_ceil(2);
    let size = rng.random_range(lo..=d - 1);
    let mut features = index::sample(rng, d, size).into_vec();
    features.sort_unstable();
    features
}

#[derive(Debug, Clone)]
struct Round {
    features: Vec<usize>,
    lof: LofModel,
    mean: f64,
    std: f64,
}

#[derive(Debug, Clone)]
pub struct FeatureBagModel {
    base_k: usize,
    combine: BagCombine,
    rounds: Vec<Round>,
    train: DataMatrix,
    train_scores: Vec<f64>,
}

impl FeatureBagModel {
    pub fn fit(train: DataMatrix, params: FeatureBagParams) -> Result<Self> {
        if params.rounds == 0 {
            return Err(Error::invalid("feature bagging needs at least one round"));
        }
        let subspaces: Vec<Vec<usize>> = (0..params.rounds)
            .map(|r| sample_subspace(train.cols(), &mut rng::stream(params.seed, r as u64)))
            .collect();
        Self::with_subspaces(train, &subspaces, params.base_k, params.combine)
    }

    /// Fits one LOF round per given subspace, skipping the random draw.
    pub fn with_subspaces(
        train: DataMatrix,
        subspaces: &[Vec<usize>],
        base_k: usize,
        combine: BagCombine,
    ) -> Result<Self> {
        if subspaces.is_empty() {
            return Err(Error::invalid("feature bagging needs at least one round"));
        }
        let fitted: Vec<(Round, Vec<f64>)> = subspaces
            .par_iter()
            .map(|features| {
                let lof = LofModel::fit(
                    train.select_columns(features)?,
                    base_k,
                    SearchStrategy::KdTree,
                )?;
                let raw = lof.score(Target::Train)?;
                let (mean, std) = mean_std(&raw);
                let standardized = standardize_with(&raw, mean, std);
                Ok((
                    Round {
                        features: features.clone(),
                        lof,
                        mean,
                        std,
                    },
                    standardized,
                ))
            })
            .collect::<Result<_>>()?;
        let (rounds, per_round): (Vec<Round>, Vec<Vec<f64>>) = fitted.into_iter().unzip();
        let train_scores = combine_rounds(&per_round, combine);
        Ok(Self {
            base_k,
            combine,
            rounds,
            train,
            train_scores,
        })
    }

    pub fn train(&self) -> &DataMatrix {
        &self.train
    }

    pub fn base_k(&self) -> usize {
        self.base_k
    }

    pub fn combine(&self) -> BagCombine {
        self.combine
    }

    pub fn subspaces(&self) -> Vec<Vec<usize>> {
        self.rounds.iter().map(|r| r.features.clone()).collect()
    }

    pub fn score(&self, target: Target<'_>) -> Result<Vec<f64>> {
        let query = match target {
            Target::Train => return Ok(self.train_scores.clone()),
            Target::Points(q) => q,
        };
        query.check_cols(self.train.cols())?;
        let per_round: Vec<Vec<f64>> = self
            .rounds
            .par_iter()
            .map(|round| {
                let sub = query.select_columns(&round.features)?;
                let raw = round.lof.score(Target::Points(&sub))?;
                Ok(standardize_with(&raw, round.mean, round.std))
            })
            .collect::<Result<_>>()?;
        Ok(combine_rounds(&per_round, self.combine))
    }
}

fn combine_rounds(per_round: &[Vec<f64>], combine: BagCombine) -> Vec<f64> {
    let n = per_round[0].len();
    let m = per_round.len() as f64;
    (0..n)
        .map(|i| {
            let values = per_round.iter().map(|r| r[i]);
            match combine {
                BagCombine::Average => values.sum::<f64>() / m,
                BagCombine::Max => values.fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}

pub fn feature_bagging_scores(
    train: &DataMatrix,
    target: Target<'_>,
    params: FeatureBagParams,
) -> Result<Vec<f64>> {
    FeatureBagModel::fit(train.clone(), params)?.score(target)
}
