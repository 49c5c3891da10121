//! Isolation forest.
//!
//! Each tree is grown on a subsample of `psi` rows drawn without
//! replacement, splitting on a uniformly chosen non-constant feature at a
//! uniform value strictly inside that feature's range, down to a height
//! limit of `ceil(log2 psi)`. A point's path length is the depth of the leaf
//! it lands in plus `c(leaf size)`, and the score is `2^(-E[h] / c(psi))`.

use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::rng::{self, Rng};

pub const EULER_GAMMA: f64 = 0.5772156649;

/// Expected path length of an unsuccessful binary-search-tree lookup among
/// `n` points, used to normalize isolation depths.
pub fn average_path_length(n: usize) -> f64 {
    match n {
        0 | 1 => 0.0,
        2 => 1.0,
        _ => {
            let n = n as f64;
            2.0 * ((n - 1.0).ln() + EULER_GAMMA) - 2.0 * (n - 1.0) / n
        }
    }
}

/// Maps a mean path length to a score in (0, 1].
pub fn anomaly_score(mean_path: f64, psi: usize) -> f64 {
    2f64.powf(-mean_path / average_path_length(psi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoForestParams {
    pub n_trees: usize,
    /// Requested subsample size; clamped to the number of train rows.
    pub max_samples: usize,
    pub seed: u64,
}

impl Default for IsoForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_samples: 256,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsoNode {
    Internal {
        feature: usize,
        split: f64,
        left: usize,
        right: usize,
    },
    External {
        size: usize,
    },
}

/// Flat tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoTree {
    pub nodes: Vec<IsoNode>,
}

impl IsoTree {
    fn grow(train: &DataMatrix, rows: Vec<usize>, height_limit: usize, rng: &mut Rng) -> Self {
        let mut tree = IsoTree { nodes: Vec::new() };
        tree.grow_node(train, rows, 0, height_limit, rng);
        tree
    }

    fn grow_node(
        &mut self,
        train: &DataMatrix,
        rows: Vec<usize>,
        depth: usize,
        height_limit: usize,
        rng: &mut Rng,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(IsoNode::External { size: rows.len() });
        if depth >= height_limit || rows.len() <= 1 {
            return id;
        }
        let ranges: Vec<(usize, f64, f64)> = (0..train.cols())
            .filter_map(|j| {
                let (lo, hi) =
                    rows.iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
                            let v = train.row(r)[j];
                            (lo.min(v), hi.max(v))
                        });
                (hi > lo).then_some((j, lo, hi))
            })
            .collect();
        if ranges.is_empty() {
            return id;
        }
        let (feature, lo, hi) = ranges[rng.random_range(0..ranges.len())];
        let split = loop {
            let s = rng.random_range(lo..hi);
            if s > lo {
                break s;
            }
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&r| train.row(r)[feature] < split);
        let left = self.grow_node(train, left_rows, depth + 1, height_limit, rng);
        let right = self.grow_node(train, right_rows, depth + 1, height_limit, rng);
        self.nodes[id] = IsoNode::Internal {
            feature,
            split,
            left,
            right,
        };
        id
    }

    pub fn path_length(&self, x: &[f64]) -> f64 {
        let mut node = 0;
        let mut depth = 0usize;
        loop {
            match self.nodes[node] {
                IsoNode::Internal {
                    feature,
                    split,
                    left,
                    right,
                } => {
                    node = if x[feature] < split { left } else { right };
                    depth += 1;
                }
                IsoNode::External { size } => return depth as f64 + average_path_length(size),
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[IsoNode], id: usize) -> usize {
            match nodes[id] {
                IsoNode::Internal { left, right, .. } => {
                    1 + walk(nodes, left).max(walk(nodes, right))
                }
                IsoNode::External { .. } => 0,
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoForest {
    pub trees: Vec<IsoTree>,
    pub psi: usize,
    pub seed: u64,
    pub n_features: usize,
}

pub fn iforest_fit(train: &DataMatrix, params: IsoForestParams) -> Result<IsoForest> {
    if params.n_trees == 0 {
        return Err(Error::invalid("isolation forest needs at least one tree"));
    }
    if train.rows() < 2 {
        return Err(Error::invalid(
            "isolation forest needs at least 2 train rows",
        ));
    }
    if params.max_samples < 2 {
        return Err(Error::invalid(format!(
            "isolation forest subsample size must be >= 2, got {}",
            params.max_samples
        )));
    }
    let psi = params.max_samples.min(train.rows());
    let height_limit = (psi as f64).log2().ceil() as usize;
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(params.seed, t as u64);
            let rows = index::sample(&mut rng, train.rows(), psi).into_vec();
            IsoTree::grow(train, rows, height_limit, &mut rng)
        })
        .collect();
    Ok(IsoForest {
        trees,
        psi,
        seed: params.seed,
        n_features: train.cols(),
    })
}

pub fn iforest_scores(forest: &IsoForest, query: &DataMatrix) -> Result<Vec<f64>> {
    query.check_cols(forest.n_features)?;
    let t = forest.trees.len() as f64;
    Ok((0..query.rows())
        .into_par_iter()
        .map(|i| {
            let x = query.row(i);
            let total: f64 = forest.trees.iter().map(|tree| tree.path_length(x)).sum();
            anomaly_score(total / t, forest.psi)
        })
        .collect())
}
