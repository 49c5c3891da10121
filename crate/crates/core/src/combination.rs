//! Combining a samples-by-detectors score matrix into one score per sample.
//!
//! Combiners never standardize; callers z-score the columns first when the
//! detectors' scales differ. AOM and MOA share one bucket partition: the
//! detector columns are shuffled with the seed and cut into contiguous
//! chunks, the first `m % buckets` chunks taking one extra column. Groups
//! are then reported sorted, each by column index and all by first column.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineMethod {
    Average,
    Max,
    Aom,
    Moa,
}

fn row_mean(row: &[f64]) -> f64 {
    row.iter().sum::<f64>() / row.len() as f64
}

fn row_max(row: &[f64]) -> f64 {
    row.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn combine_average(scores: &ScoreMatrix) -> Vec<f64> {
    scores.iter_rows().map(row_mean).collect()
}

pub fn combine_max(scores: &ScoreMatrix) -> Vec<f64> {
    scores.iter_rows().map(row_max).collect()
}

/// Seeded split of `m` detector columns into `buckets` groups.
pub fn bucket_partition(m: usize, buckets: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if buckets == 0 || buckets > m {
        return Err(Error::invalid(format!(
            "bucket count must be in [1, {m}], got {buckets}"
        )));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng::stream(seed, 0));
    let (base, extra) = (m / buckets, m % buckets);
    let mut groups = Vec::with_capacity(buckets);
    let mut start = 0;
    for b in 0..buckets {
        let len = base + usize::from(b < extra);
        let mut group = order[start..start + len].to_vec();
        group.sort_unstable();
        groups.push(group);
        start += len;
    }
    // Canonical order so singleton or single-bucket partitions reduce
    // in column order, exactly like the plain combiners.
    groups.sort_unstable_by_key(|g| g[0]);
    Ok(groups)
}

fn bucketed(
    scores: &ScoreMatrix,
    buckets: usize,
    seed: u64,
    inner: fn(&[f64]) -> f64,
    outer: fn(&[f64]) -> f64,
) -> Result<Vec<f64>> {
    let groups = bucket_partition(scores.cols(), buckets, seed)?;
    Ok((0..scores.rows())
        .into_par_iter()
        .map(|i| {
            let row = scores.row(i);
            let per_bucket: Vec<f64> = groups
                .iter()
                .map(|g| inner(&g.iter().map(|&j| row[j]).collect::<Vec<_>>()))
                .collect();
            outer(&per_bucket)
        })
        .collect())
}

/// Average of bucket maxima.
pub fn combine_aom(scores: &ScoreMatrix, buckets: usize, seed: u64) -> Result<Vec<f64>> {
    bucketed(scores, buckets, seed, row_max, row_mean)
}

/// Maximum of bucket averages.
pub fn combine_moa(scores: &ScoreMatrix, buckets: usize, seed: u64) -> Result<Vec<f64>> {
    bucketed(scores, buckets, seed, row_mean, row_max)
}

pub fn combine(
    scores: &ScoreMatrix,
    method: CombineMethod,
    buckets: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    match method {
        CombineMethod::Average => Ok(combine_average(scores)),
        CombineMethod::Max => Ok(combine_max(scores)),
        CombineMethod::Aom => combine_aom(scores, buckets, seed),
        CombineMethod::Moa => combine_moa(scores, buckets, seed),
    }
}
