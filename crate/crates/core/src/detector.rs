//! The uniform detector contract.
//!
//! Every algorithm is configured by a [`DetectorParams`] value and fitted
//! into a [`FittedDetector`], which carries the train scores, the
//! contamination threshold, the train labels and the score statistics used
//! for probability conversion. A fitted detector is immutable and may be
//! scored from many threads at once.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ensemble::{
    iforest_fit, iforest_scores, FeatureBagModel, FeatureBagParams, IsoForest, IsoForestParams,
};
use crate::error::{Error, Result};
use crate::linear::{pca_fit, pca_scores, PcaState};
use crate::matrix::{DataMatrix, Target};
use crate::neighbors::SearchStrategy;
use crate::proximity::{
    hbos_fit, hbos_scores, AbodModel, HbosParams, HbosState, KnnMode, KnnModel, KnnParams,
    LofModel, DEFAULT_ABOD_K,
};
use crate::scores::{
    check_contamination, labels_from_scores, mean_std, proba_linear, proba_unify,
    threshold_from_scores, ProbaMethod,
};

/// Algorithm tags as they appear on the command line and in model files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Knn,
    AvgKnn,
    MedKnn,
    Lof,
    Abod,
    Hbos,
    Pca,
    IForest,
    Fb,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Knn,
        Algorithm::AvgKnn,
        Algorithm::MedKnn,
        Algorithm::Lof,
        Algorithm::Abod,
        Algorithm::Hbos,
        Algorithm::Pca,
        Algorithm::IForest,
        Algorithm::Fb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Knn => "knn",
            Algorithm::AvgKnn => "avgknn",
            Algorithm::MedKnn => "medknn",
            Algorithm::Lof => "lof",
            Algorithm::Abod => "abod",
            Algorithm::Hbos => "hbos",
            Algorithm::Pca => "pca",
            Algorithm::IForest => "iforest",
            Algorithm::Fb => "fb",
        }
    }

    /// Default hyperparameters, with an optional neighbor count override
    /// for the neighbor-based algorithms and a seed for randomized ones.
    pub fn params(self, k: Option<usize>, seed: u64) -> DetectorParams {
        let knn = |mode| {
            DetectorParams::Knn(KnnParams {
                k: k.unwrap_or(5),
                mode,
            })
        };
        match self {
            Algorithm::Knn => knn(KnnMode::Largest),
            Algorithm::AvgKnn => knn(KnnMode::Mean),
            Algorithm::MedKnn => knn(KnnMode::Median),
            Algorithm::Lof => DetectorParams::Lof { k: k.unwrap_or(20) },
            Algorithm::Abod => DetectorParams::Abod {
                k: k.unwrap_or(DEFAULT_ABOD_K),
            },
            Algorithm::Hbos => DetectorParams::Hbos(HbosParams::default()),
            Algorithm::Pca => DetectorParams::Pca,
            Algorithm::IForest => DetectorParams::IForest(IsoForestParams {
                seed,
                ..Default::default()
            }),
            Algorithm::Fb => DetectorParams::FeatureBagging(FeatureBagParams {
                base_k: k.unwrap_or(10),
                seed,
                ..Default::default()
            }),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let valid: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                Error::invalid(format!(
                    "unknown algorithm '{s}', expected one of: {}",
                    valid.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetectorParams {
    Knn(KnnParams),
    Lof { k: usize },
    Abod { k: usize },
    Hbos(HbosParams),
    Pca,
    IForest(IsoForestParams),
    FeatureBagging(FeatureBagParams),
}

impl DetectorParams {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            DetectorParams::Knn(p) => match p.mode {
                KnnMode::Largest => Algorithm::Knn,
                KnnMode::Mean => Algorithm::AvgKnn,
                KnnMode::Median => Algorithm::MedKnn,
            },
            DetectorParams::Lof { .. } => Algorithm::Lof,
            DetectorParams::Abod { .. } => Algorithm::Abod,
            DetectorParams::Hbos(_) => Algorithm::Hbos,
            DetectorParams::Pca => Algorithm::Pca,
            DetectorParams::IForest(_) => Algorithm::IForest,
            DetectorParams::FeatureBagging(_) => Algorithm::Fb,
        }
    }

    pub fn fit(&self, train: &DataMatrix, contamination: f64) -> Result<FittedDetector> {
        check_contamination(contamination)?;
        let model = Model::fit(self, train)?;
        let scores = model.train_scores(train)?;
        let stats = TrainStats::from_scores(scores, contamination)?;
        Ok(FittedDetector {
            params: self.clone(),
            model,
            stats,
        })
    }
}

/// Train-score summary fixed at fit time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainStats {
    pub scores: Vec<f64>,
    pub threshold: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub contamination: f64,
}

impl TrainStats {
    pub fn from_scores(scores: Vec<f64>, contamination: f64) -> Result<Self> {
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::invalid("detector produced non-finite train scores"));
        }
        let threshold = threshold_from_scores(&scores, contamination)?;
        let (mean, std) = mean_std(&scores);
        let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            scores,
            threshold,
            mean,
            std,
            min,
            max,
            contamination,
        })
    }
}

/// Learned state in serializable form. Neighbor-based models keep their
/// train set and rebuild search structures on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelState {
    Knn {
        train: DataMatrix,
    },
    Lof {
        train: DataMatrix,
    },
    Abod {
        train: DataMatrix,
    },
    Hbos(HbosState),
    Pca(PcaState),
    IForest(IsoForest),
    FeatureBagging {
        train: DataMatrix,
        subspaces: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone)]
enum Model {
    Knn(KnnModel),
    Lof(LofModel),
    Abod(AbodModel),
    Hbos(HbosState),
    Pca(PcaState),
    IForest(IsoForest),
    FeatureBagging(FeatureBagModel),
}

impl Model {
    fn fit(params: &DetectorParams, train: &DataMatrix) -> Result<Self> {
        let strategy = SearchStrategy::KdTree;
        Ok(match params {
            DetectorParams::Knn(p) => Model::Knn(KnnModel::fit(train.clone(), *p, strategy)?),
            DetectorParams::Lof { k } => Model::Lof(LofModel::fit(train.clone(), *k, strategy)?),
            DetectorParams::Abod { k } => Model::Abod(AbodModel::fit(train.clone(), *k, strategy)?),
            DetectorParams::Hbos(p) => Model::Hbos(hbos_fit(train, *p)?),
            DetectorParams::Pca => Model::Pca(pca_fit(train)?),
            DetectorParams::IForest(p) => Model::IForest(iforest_fit(train, *p)?),
            DetectorParams::FeatureBagging(p) => {
                Model::FeatureBagging(FeatureBagModel::fit(train.clone(), *p)?)
            }
        })
    }

    fn restore(params: &DetectorParams, state: ModelState) -> Result<Self> {
        let strategy = SearchStrategy::KdTree;
        let mismatch = || Error::invalid("model state does not match its parameters");
        Ok(match (params, state) {
            (DetectorParams::Knn(p), ModelState::Knn { train }) => {
                Model::Knn(KnnModel::fit(train, *p, strategy)?)
            }
            (DetectorParams::Lof { k }, ModelState::Lof { train }) => {
                Model::Lof(LofModel::fit(train, *k, strategy)?)
            }
            (DetectorParams::Abod { k }, ModelState::Abod { train }) => {
                Model::Abod(AbodModel::fit(train, *k, strategy)?)
            }
            (DetectorParams::Hbos(_), ModelState::Hbos(s)) => Model::Hbos(s),
            (DetectorParams::Pca, ModelState::Pca(s)) => Model::Pca(s),
            (DetectorParams::IForest(_), ModelState::IForest(f)) => Model::IForest(f),
            (
                DetectorParams::FeatureBagging(p),
                ModelState::FeatureBagging { train, subspaces },
            ) => Model::FeatureBagging(FeatureBagModel::with_subspaces(
                train, &subspaces, p.base_k, p.combine,
            )?),
            _ => return Err(mismatch()),
        })
    }

    fn state(&self) -> ModelState {
        match self {
            Model::Knn(m) => ModelState::Knn {
                train: m.train().clone(),
            },
            Model::Lof(m) => ModelState::Lof {
                train: m.train().clone(),
            },
            Model::Abod(m) => ModelState::Abod {
                train: m.train().clone(),
            },
            Model::Hbos(s) => ModelState::Hbos(s.clone()),
            Model::Pca(s) => ModelState::Pca(s.clone()),
            Model::IForest(f) => ModelState::IForest(f.clone()),
            Model::FeatureBagging(m) => ModelState::FeatureBagging {
                train: m.train().clone(),
                subspaces: m.subspaces(),
            },
        }
    }

    /// Neighbor-based models exclude each train point from its own
    /// neighborhood; the rest score the train rows like any other points.
    fn train_scores(&self, train: &DataMatrix) -> Result<Vec<f64>> {
        match self {
            Model::Knn(_) | Model::Lof(_) | Model::Abod(_) | Model::FeatureBagging(_) => {
                self.score(Target::Train)
            }
            Model::Hbos(_) | Model::Pca(_) | Model::IForest(_) => self.score(Target::Points(train)),
        }
    }

    fn score(&self, target: Target<'_>) -> Result<Vec<f64>> {
        match (self, target) {
            (Model::Knn(m), t) => m.score(t),
            (Model::Lof(m), t) => m.score(t),
            (Model::Abod(m), t) => m.score(t),
            (Model::FeatureBagging(m), t) => m.score(t),
            (Model::Hbos(s), Target::Points(q)) => hbos_scores(s, q),
            (Model::Pca(s), Target::Points(q)) => pca_scores(s, q),
            (Model::IForest(f), Target::Points(q)) => iforest_scores(f, q),
            (Model::Hbos(_) | Model::Pca(_) | Model::IForest(_), Target::Train) => Err(
                Error::invalid("this model keeps no train set; score the train matrix explicitly"),
            ),
        }
    }

    fn n_features(&self) -> usize {
        match self {
            Model::Knn(m) => m.train().cols(),
            Model::Lof(m) => m.train().cols(),
            Model::Abod(m) => m.train().cols(),
            Model::FeatureBagging(m) => m.train().cols(),
            Model::Hbos(s) => s.features.len(),
            Model::Pca(s) => s.mean.len(),
            Model::IForest(f) => f.n_features,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FittedDetector {
    params: DetectorParams,
    model: Model,
    stats: TrainStats,
}

impl FittedDetector {
    /// Rebuilds a detector from persisted parts.
    pub fn restore(params: DetectorParams, state: ModelState, stats: TrainStats) -> Result<Self> {
        check_contamination(stats.contamination)?;
        let model = Model::restore(&params, state)?;
        Ok(Self {
            params,
            model,
            stats,
        })
    }

    pub fn params(&self) -> &DetectorParams {
        &self.params
    }

    pub fn algorithm(&self) -> Algorithm {
        self.params.algorithm()
    }

    pub fn state(&self) -> ModelState {
        self.model.state()
    }

    pub fn stats(&self) -> &TrainStats {
        &self.stats
    }

    pub fn n_features(&self) -> usize {
        self.model.n_features()
    }

    pub fn train_scores(&self) -> &[f64] {
        &self.stats.scores
    }

    pub fn threshold(&self) -> f64 {
        self.stats.threshold
    }

    pub fn contamination(&self) -> f64 {
        self.stats.contamination
    }

    pub fn train_labels(&self) -> Vec<u8> {
        labels_from_scores(&self.stats.scores, self.stats.threshold)
    }

    /// Raw outlier scores for new points; larger is more anomalous.
    pub fn decision_function(&self, x: &DataMatrix) -> Result<Vec<f64>> {
        x.check_cols(self.n_features())?;
        self.model.score(Target::Points(x))
    }

    pub fn predict(&self, x: &DataMatrix) -> Result<Vec<u8>> {
        Ok(labels_from_scores(
            &self.decision_function(x)?,
            self.stats.threshold,
        ))
    }

    pub fn predict_proba(&self, x: &DataMatrix, method: ProbaMethod) -> Result<Vec<f64>> {
        let scores = self.decision_function(x)?;
        Ok(self.proba_from_scores(&scores, method))
    }

    pub fn proba_from_scores(&self, scores: &[f64], method: ProbaMethod) -> Vec<f64> {
        match method {
            ProbaMethod::Linear => proba_linear(scores, self.stats.min, self.stats.max),
            ProbaMethod::Unify => proba_unify(scores, self.stats.mean, self.stats.std),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_data, GenParams};

    fn data() -> (DataMatrix, DataMatrix) {
        let (train, test) = generate_data(GenParams {
            n_train: 80,
            n_test: 30,
            n_features: 3,
            seed: 4,
            ..Default::default()
        })
        .unwrap();
        (train.x, test.x)
    }

    #[test]
    fn every_algorithm_honours_the_contract() {
        let (train, test) = data();
        for algo in Algorithm::ALL {
            let det = algo.params(None, 1).fit(&train, 0.1).unwrap();
            assert_eq!(det.algorithm(), algo);
            let flagged = det.train_labels().iter().filter(|&&l| l == 1).count();
            assert_eq!(
                flagged,
                det.train_scores()
                    .iter()
                    .filter(|&&s| s > det.threshold())
                    .count()
            );
            assert!(flagged.abs_diff(8) <= 1, "{algo}: {flagged}");
            let s = det.decision_function(&test).unwrap();
            assert_eq!(s.len(), test.rows());
            assert!(s.iter().all(|v| v.is_finite()));
            for m in [ProbaMethod::Linear, ProbaMethod::Unify] {
                assert!(det
                    .predict_proba(&test, m)
                    .unwrap()
                    .iter()
                    .all(|p| (0.0..=1.0).contains(p)));
            }
            assert!(det
                .decision_function(&DataMatrix::new(1, 2, vec![0.0; 2]).unwrap())
                .is_err());
        }
    }

    #[test]
    fn restore_reproduces_scores() {
        let (train, test) = data();
        for algo in Algorithm::ALL {
            let det = algo.params(Some(6), 3).fit(&train, 0.2).unwrap();
            let back =
                FittedDetector::restore(det.params().clone(), det.state(), det.stats().clone())
                    .unwrap();
            assert_eq!(
                det.decision_function(&test).unwrap(),
                back.decision_function(&test).unwrap()
            );
        }
    }

    #[test]
    fn algorithm_names_parse() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.name().parse::<Algorithm>().unwrap(), algo);
        }
        let err = "nosuch".parse::<Algorithm>().unwrap_err().to_string();
        assert!(err.contains("knn") && err.contains("fb"));
    }

    #[test]
    fn invalid_contamination() {
        let (train, _) = data();
        assert!(Algorithm::Pca.params(None, 0).fit(&train, 0.0).is_err());
        assert!(Algorithm::Pca.params(None, 0).fit(&train, 0.7).is_err());
    }

    #[test]
    fn mismatched_state_is_rejected() {
        let (train, _) = data();
        let det = Algorithm::Pca.params(None, 0).fit(&train, 0.1).unwrap();
        let err = FittedDetector::restore(
            Algorithm::Hbos.params(None, 0),
            det.state(),
            det.stats().clone(),
        );
        assert!(err.is_err());
    }
}
