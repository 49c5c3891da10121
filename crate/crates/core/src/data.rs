//! Labeled datasets and the synthetic generator: Gaussian inliers with
//! uniformly scattered outliers placed at the tail of each split.

use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::rng;
use crate::scores::check_contamination;

/// Half-width of the box outliers are drawn from.
pub const OUTLIER_RANGE: f64 = 6.0;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub x: DataMatrix,
    /// 0 = inlier, 1 = outlier.
    pub y: Vec<u8>,
}

impl LabeledDataset {
    pub fn new(x: DataMatrix, y: Vec<u8>) -> Result<Self> {
        if y.len() != x.rows() {
            return Err(Error::invalid(format!(
                "{} labels for {} rows",
                y.len(),
                x.rows()
            )));
        }
        if y.iter().any(|&l| l > 1) {
            return Err(Error::invalid("labels must be 0 or 1"));
        }
        Ok(Self { x, y })
    }

    pub fn n_outliers(&self) -> usize {
        self.y.iter().filter(|&&l| l == 1).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub n_train: usize,
    pub n_test: usize,
    pub n_features: usize,
    pub contamination: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n_train: 200,
            n_test: 100,
            n_features: 2,
            contamination: 0.1,
            seed: 0,
        }
    }
}

/// Train uses RNG stream 0 and test stream 1 of the seed.
pub fn generate_data(params: GenParams) -> Result<(LabeledDataset, LabeledDataset)> {
    if params.n_train == 0 || params.n_test == 0 || params.n_features == 0 {
        return Err(Error::invalid("sample and feature counts must be >= 1"));
    }
    check_contamination(params.contamination)?;
    let train = generate_split(params.n_train, params, 0)?;
    let test = generate_split(params.n_test, params, 1)?;
    Ok((train, test))
}

fn generate_split(n: usize, params: GenParams, stream: u64) -> Result<LabeledDataset> {
    let n_out = (params.contamination * n as f64).round() as usize;
    let n_in = n - n_out;
    let d = params.n_features;
    let mut rng = rng::stream(params.seed, stream);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let uniform = Uniform::new(-OUTLIER_RANGE, OUTLIER_RANGE).expect("valid outlier range");
    let mut values = Vec::with_capacity(n * d);
    values.extend((0..n_in * d).map(|_| normal.sample(&mut rng)));
    values.extend((0..n_out * d).map(|_| uniform.sample(&mut rng)));
    let mut y = vec![0u8; n_in];
    y.resize(n, 1);
    LabeledDataset::new(DataMatrix::new(n, d, values)?, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_shapes_and_counts() {
        let (train, test) = generate_data(GenParams {
            seed: 42,
            ..Default::default()
        })
        .unwrap();
        assert_eq!((train.x.rows(), train.x.cols()), (200, 2));
        assert_eq!((test.x.rows(), test.x.cols()), (100, 2));
        assert_eq!(train.n_outliers(), 20);
        assert_eq!(test.n_outliers(), 10);
        assert!(train.y[..180].iter().all(|&l| l == 0));
        assert!(train.y[180..].iter().all(|&l| l == 1));
    }

    #[test]
    fn deterministic_per_seed() {
        let p = GenParams {
            n_features: 3,
            seed: 7,
            ..Default::default()
        };
        assert_eq!(generate_data(p).unwrap(), generate_data(p).unwrap());
        assert_ne!(
            generate_data(p).unwrap().0,
            generate_data(GenParams { seed: 8, ..p }).unwrap().0
        );
    }

    #[test]
    fn outliers_stay_in_box() {
        let (train, _) = generate_data(GenParams {
            n_train: 500,
            contamination: 0.5,
            ..Default::default()
        })
        .unwrap();
        for (row, &l) in train.x.iter_rows().zip(&train.y) {
            if l == 1 {
                assert!(row.iter().all(|v| v.abs() <= OUTLIER_RANGE));
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate_data(GenParams {
            n_test: 0,
            ..Default::default()
        })
        .is_err());
        assert!(generate_data(GenParams {
            contamination: 0.6,
            ..Default::default()
        })
        .is_err());
    }
}
