//! Evaluation: ROC AUC via the rank-sum statistic, precision at n, and the
//! one-line performance report.

use crate::error::{Error, Result};

fn check_lengths(y: &[u8], scores: &[f64]) -> Result<()> {
    if y.len() != scores.len() {
        return Err(Error::invalid(format!(
            "{} labels but {} scores",
            y.len(),
            scores.len()
        )));
    }
    Ok(())
}

/// Mann-Whitney AUC with average ranks for tied scores.
pub fn roc_auc(y: &[u8], scores: &[f64]) -> Result<f64> {
    check_lengths(y, scores)?;
    let n_pos = y.iter().filter(|&&l| l == 1).count();
    let n_neg = y.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::invalid("roc auc needs both inliers and outliers"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end share their mean
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        let positives = order[start..end].iter().filter(|&&i| y[i] == 1).count();
        rank_sum += avg_rank * positives as f64;
        start = end;
    }
    let n_pos_f = n_pos as f64;
    Ok((rank_sum - n_pos_f * (n_pos_f + 1.0) / 2.0) / (n_pos_f * n_neg as f64))
}

/// Fraction of true outliers among the `n` top-scored samples, `n` being
/// the number of true outliers. Equal scores rank the lower index first.
pub fn precision_at_n(y: &[u8], scores: &[f64]) -> Result<f64> {
    check_lengths(y, scores)?;
    let n = y.iter().filter(|&&l| l == 1).count();
    if n == 0 {
        return Err(Error::invalid("precision at n needs at least one outlier"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let hits = order[..n].iter().filter(|&&i| y[i] == 1).count();
    Ok(hits as f64 / n as f64)
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// `"<name> Performance; ROC: <r>; Precision at n: <p>"`, both rounded half
/// away from zero to three decimals.
pub fn format_evaluation(name: &str, roc: f64, precision: f64) -> String {
    format!(
        "{name} Performance; ROC: {:.3}; Precision at n: {:.3}",
        round3(roc),
        round3(precision)
    )
}

pub fn evaluate_format(name: &str, y: &[u8], scores: &[f64]) -> Result<String> {
    Ok(format_evaluation(
        name,
        roc_auc(y, scores)?,
        precision_at_n(y, scores)?,
    ))
}
