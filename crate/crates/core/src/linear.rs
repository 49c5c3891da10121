//! Principal-component detector: the score is the sum over retained
//! components of the squared projection divided by that component's
//! eigenvalue, i.e. a squared Mahalanobis distance in the principal basis.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Components whose eigenvalue falls below this fraction of the largest
/// are dropped.
const RELATIVE_EIGEN_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaState {
    pub mean: Vec<f64>,
    /// Unit eigenvectors, one per row, ordered by descending eigenvalue.
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub kept: usize,
}

pub fn pca_fit(train: &DataMatrix) -> Result<PcaState> {
    let (n, d) = (train.rows(), train.cols());
    if n < 2 {
        return Err(Error::invalid(format!(
            "pca requires at least 2 train rows, got {n}"
        )));
    }
    let mean: Vec<f64> = (0..d)
        .map(|j| train.iter_rows().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for row in train.iter_rows() {
        for a in 0..d {
            let da = row[a] - mean[a];
            for b in a..d {
                cov[(a, b)] += da * (row[b] - mean[b]);
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            let v = cov[(a, b)] / n as f64;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }

    let eigen = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .total_cmp(&eigen.eigenvalues[a])
            .then(a.cmp(&b))
    });
    // Round-off can leave tiny negative eigenvalues on singular covariances.
    let eigenvalues: Vec<f64> = order
        .iter()
        .map(|&i| eigen.eigenvalues[i].max(0.0))
        .collect();
    let components: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| eigen.eigenvectors.column(i).iter().copied().collect())
        .collect();
    let largest = eigenvalues[0];
    let kept = if largest > 0.0 {
        eigenvalues
            .iter()
            .take_while(|&&l| l >= RELATIVE_EIGEN_FLOOR * largest)
            .count()
    } else {
        0
    };
    Ok(PcaState {
        mean,
        components,
        eigenvalues,
        kept,
    })
}

pub fn pca_scores(state: &PcaState, query: &DataMatrix) -> Result<Vec<f64>> {
    query.check_cols(state.mean.len())?;
    Ok((0..query.rows())
        .into_par_iter()
        .map(|i| {
            let centered: Vec<f64> = query
                .row(i)
                .iter()
                .zip(&state.mean)
                .map(|(x, m)| x - m)
                .collect();
            state.components[..state.kept]
                .iter()
                .zip(&state.eigenvalues)
                .map(|(v, &lambda)| {
                    let proj: f64 = v.iter().zip(&centered).map(|(a, b)| a * b).sum();
                    proj * proj / lambda
                })
                .sum()
        })
        .collect())
}
