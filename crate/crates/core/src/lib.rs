//! Multivariate outlier detection.
//!
//! Detectors share one contract ([`DetectorParams::fit`] produces a
//! [`FittedDetector`] with train scores, a contamination threshold and train
//! labels, and scores new data through `decision_function`, `predict` and
//! `predict_proba`). Around them sit neighbor search, score combination,
//! synthetic data, evaluation metrics and CSV I/O.
//!
//! Scores are oriented so that larger always means more anomalous. All
//! randomized procedures take an explicit seed and produce identical
//! results regardless of the rayon thread count.
//!
//! ```
//! use oddkit_core::{generate_data, roc_auc, Algorithm, GenParams};
//!
//! let (train, test) = generate_data(GenParams { seed: 1, ..Default::default() }).unwrap();
//! let det = Algorithm::Knn.params(Some(5), 0).fit(&train.x, 0.1).unwrap();
//! let scores = det.decision_function(&test.x).unwrap();
//! assert!(roc_auc(&test.y, &scores).unwrap() > 0.8);
//! ```

pub mod combination;
pub mod data;
pub mod detector;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod linear;
pub mod matrix;
pub mod metrics;
pub mod neighbors;
pub mod proximity;
pub mod rng;
pub mod scores;

pub use combination::{
    combine, combine_aom, combine_average, combine_max, combine_moa, CombineMethod,
};
pub use data::{generate_data, GenParams, LabeledDataset};
pub use detector::{Algorithm, DetectorParams, FittedDetector, ModelState, TrainStats};
pub use error::{Error, Result};
pub use matrix::{DataMatrix, ScoreMatrix, Target};
pub use metrics::{evaluate_format, format_evaluation, precision_at_n, roc_auc};
pub use scores::{
    labels_from_scores, proba_linear, proba_unify, threshold_from_scores, zscore_standardize,
    ProbaMethod, DEFAULT_CONTAMINATION,
};
