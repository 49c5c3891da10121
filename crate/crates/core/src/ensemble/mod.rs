//! Ensembling detectors: isolation forest and feature bagging over LOF.

pub mod feature_bagging;
pub mod iforest;

pub use feature_bagging::{
    feature_bagging_scores, sample_subspace, BagCombine, FeatureBagModel, FeatureBagParams,
};
pub use iforest::{
    anomaly_score, average_path_length, iforest_fit, iforest_scores, IsoForest, IsoForestParams,
    IsoNode, IsoTree, EULER_GAMMA,
};
