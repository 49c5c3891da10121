//! Proximity detectors: k-nearest-neighbor distance, local outlier factor,
//! fast angle-based outlier detection and histogram-based scoring.

pub mod abod;
pub mod hbos;
pub mod knn;
pub mod lof;

pub use abod::{abod_scores, AbodModel, DEFAULT_ABOD_K};
pub use hbos::{hbos_fit, hbos_scores, FeatureHistogram, HbosParams, HbosState};
pub use knn::{knn_scores, KnnMode, KnnModel, KnnParams};
pub use lof::{lof_scores, LofModel, LRD_CAP};
