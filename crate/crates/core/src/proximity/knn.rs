use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, Target};
use crate::neighbors::{NeighborIndex, NeighborResult, SearchStrategy};

/// How the `k` neighbor distances collapse into one score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnnMode {
    /// Distance to the k-th neighbor.
    Largest,
    Mean,
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
    pub mode: KnnMode,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self {
            k: 5,
            mode: KnnMode::Largest,
        }
    }
}

impl KnnParams {
    fn aggregate(&self, nb: &NeighborResult) -> f64 {
        let d = &nb.distances;
        match self.mode {
            KnnMode::Largest => d[d.len() - 1],
            KnnMode::Mean => d.iter().sum::<f64>() / d.len() as f64,
            KnnMode::Median => {
                let mid = d.len() / 2;
                if d.len() % 2 == 1 {
                    d[mid]
                } else {
                    (d[mid - 1] + d[mid]) / 2.0
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct KnnModel {
    params: KnnParams,
    index: NeighborIndex,
}

impl KnnModel {
    pub fn fit(train: DataMatrix, params: KnnParams, strategy: SearchStrategy) -> Result<Self> {
        if params.k == 0 {
            return Err(Error::invalid("knn requires k >= 1"));
        }
        Ok(Self {
            params,
            index: NeighborIndex::new(train, strategy),
        })
    }

    pub fn params(&self) -> KnnParams {
        self.params
    }

    pub fn train(&self) -> &DataMatrix {
        self.index.points()
    }

    pub fn score(&self, target: Target<'_>) -> Result<Vec<f64>> {
        let neighbors = match target {
            Target::Train => self.index.query_self(self.params.k)?,
            Target::Points(q) => self.index.query_batch(q, self.params.k)?,
        };
        Ok(neighbors
            .par_iter()
            .map(|nb| self.params.aggregate(nb))
            .collect())
    }
}

pub fn knn_scores(train: &DataMatrix, target: Target<'_>, params: KnnParams) -> Result<Vec<f64>> {
    KnnModel::fit(train.clone(), params, SearchStrategy::KdTree)?.score(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn train() -> DataMatrix {
        DataMatrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [0.0, 3.0]]).unwrap()
    }

    #[test]
    fn largest_k1() {
        let p = KnnParams {
            k: 1,
            mode: KnnMode::Largest,
        };
        assert_eq!(
            knn_scores(&train(), Target::Train, p).unwrap(),
            vec![1.0, 1.0, 2.0]
        );
    }

    #[test]
    fn mean_k2() {
        let p = KnnParams {
            k: 2,
            mode: KnnMode::Mean,
        };
        assert_eq!(
            knn_scores(&train(), Target::Train, p).unwrap(),
            vec![2.0, 1.5, 2.5]
        );
    }

    #[test]
    fn median_even_and_odd() {
        let t = DataMatrix::from_rows(&[[0.0], [1.0], [3.0], [7.0]]).unwrap();
        let q = DataMatrix::from_rows(&[[0.0]]).unwrap();
        let s = knn_scores(
            &t,
            Target::Points(&q),
            KnnParams {
                k: 3,
                mode: KnnMode::Median,
            },
        )
        .unwrap();
        assert_eq!(s, vec![1.0]);
        let s = knn_scores(
            &t,
            Target::Points(&q),
            KnnParams {
                k: 4,
                mode: KnnMode::Median,
            },
        )
        .unwrap();
        assert_eq!(s, vec![2.0]);
    }

    #[test]
    fn identical_points_score_zero() {
        let t = DataMatrix::from_rows(&[[2.0, 2.0]; 6]).unwrap();
        for mode in [KnnMode::Largest, KnnMode::Mean, KnnMode::Median] {
            let s = knn_scores(&t, Target::Train, KnnParams { k: 3, mode }).unwrap();
            assert!(s.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn k_range_depends_on_target() {
        let p = KnnParams {
            k: 3,
            mode: KnnMode::Largest,
        };
        assert!(knn_scores(&train(), Target::Train, p).is_err());
        assert!(knn_scores(&train(), Target::Points(&train()), p).is_ok());
        assert!(knn_scores(&train(), Target::Train, KnnParams { k: 0, ..p }).is_err());
    }
}
