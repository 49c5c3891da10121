//! Fast angle-based outlier detection over the k-neighborhood.
//!
//! For each unordered neighbor pair `(y, z)` of `x` the weighted cosine
//! `<y-x, z-x> / (|y-x|^2 |z-x|^2)` is collected; the angle-based factor is
//! the (population) variance of those values. Outliers see their neighbors
//! in a narrow cone, so the factor is small. The returned score is its
//! negation so larger means more anomalous.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, Target};
use crate::neighbors::{NeighborIndex, SearchStrategy};

pub const DEFAULT_ABOD_K: usize = 10;

/// Difference vectors shorter than this are skipped.
const MIN_NORM: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct AbodModel {
    k: usize,
    index: NeighborIndex,
}

impl AbodModel {
    pub fn fit(train: DataMatrix, k: usize, strategy: SearchStrategy) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("abod requires k >= 2, got {k}")));
        }
        Ok(Self {
            k,
            index: NeighborIndex::new(train, strategy),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn train(&self) -> &DataMatrix {
        self.index.points()
    }

    pub fn score(&self, target: Target<'_>) -> Result<Vec<f64>> {
        let train = self.index.points();
        let (neighbors, queries) = match target {
            Target::Train => (self.index.query_self(self.k)?, train),
            Target::Points(q) => (self.index.query_batch(q, self.k)?, q),
        };
        Ok(neighbors
            .par_iter()
            .enumerate()
            .map(|(i, nb)| {
                let points: Vec<&[f64]> = nb.indices.iter().map(|&j| train.row(j)).collect();
                0.0 - angle_factor(queries.row(i), &points)
            })
            .collect())
    }
}

/// Variance of the weighted cosines over all neighbor pairs; 0 when no pair
/// survives the degenerate-length filter.
pub fn angle_factor(x: &[f64], neighbors: &[&[f64]]) -> f64 {
    let diffs: Vec<(Vec<f64>, f64)> = neighbors
        .iter()
        .map(|p| {
            let d: Vec<f64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
            let sq = d.iter().map(|v| v * v).sum::<f64>();
            (d, sq)
        })
        .collect();
    let mut values = Vec::with_capacity(diffs.len() * diffs.len() / 2);
    for (a, (da, sa)) in diffs.iter().enumerate() {
        if sa.sqrt() < MIN_NORM {
            continue;
        }
        for (db, sb) in &diffs[a + 1..] {
            if sb.sqrt() < MIN_NORM {
                continue;
            }
            let dot: f64 = da.iter().zip(db).map(|(u, v)| u * v).sum();
            values.push(dot / (sa * sb));
        }
    }
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / n
}

pub fn abod_scores(train: &DataMatrix, target: Target<'_>, k: usize) -> Result<Vec<f64>> {
    AbodModel::fit(train.clone(), k, SearchStrategy::KdTree)?.score(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_point_scores_highest() {
        let mut rows: Vec<[f64; 2]> = (0..12)
            .map(|i| {
                let t = f64::from(i) * std::f64::consts::TAU / 12.0;
                [t.cos(), t.sin()]
            })
            .collect();
        rows.push([40.0, 35.0]);
        let t = DataMatrix::from_rows(&rows).unwrap();
        let s = abod_scores(&t, Target::Train, 5).unwrap();
        let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(s[12], max);
    }

    #[test]
    fn centroid_beats_far_query() {
        let t = DataMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        let q = DataMatrix::from_rows(&[[0.0, 0.0], [100.0, 100.0]]).unwrap();
        let s = abod_scores(&t, Target::Points(&q), 4).unwrap();
        assert!(s[0] < s[1]);
    }

    #[test]
    fn duplicate_pairs_are_skipped() {
        let x = [0.0, 0.0];
        assert_eq!(angle_factor(&x, &[&[0.0, 0.0], &[0.0, 0.0]]), 0.0);
        // only one surviving pair: variance of a single value
        assert_eq!(
            angle_factor(&x, &[&[1.0, 0.0], &[0.0, 2.0], &[0.0, 0.0]]),
            0.0
        );
    }

    #[test]
    fn requires_two_neighbors() {
        let t = DataMatrix::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
        assert!(abod_scores(&t, Target::Train, 1).is_err());
        assert!(abod_scores(&t, Target::Train, 3).is_err());
        assert!(abod_scores(&t, Target::Train, 2).is_ok());
    }
}
