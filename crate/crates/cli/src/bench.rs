//! Benchmark table: per (dataset, algorithm) ROC AUC, precision at n and
//! fit/score wall time, averaged over detector seeds.

use std::time::Instant;

use oddkit_core::{precision_at_n, roc_auc, Algorithm, LabeledDataset};

#[derive(Debug, Clone)]
pub struct BenchDataset {
    pub name: String,
    pub train: LabeledDataset,
    pub test: LabeledDataset,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchMetrics {
    pub roc: f64,
    pub precision: f64,
    pub fit_ms: f64,
    pub score_ms: f64,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub dataset: String,
    pub algo: Algorithm,
    /// `Err` holds the failure message; the cell renders as `ERROR`.
    pub outcome: Result<BenchMetrics, String>,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub k: Option<usize>,
    pub contamination: f64,
}

fn run_cell(
    ds: &BenchDataset,
    algo: Algorithm,
    seeds: &[u64],
    cfg: BenchConfig,
) -> Result<BenchMetrics, String> {
    let mut sum = BenchMetrics {
        roc: 0.0,
        precision: 0.0,
        fit_ms: 0.0,
        score_ms: 0.0,
    };
    for &seed in seeds {
        let started = Instant::now();
        let det = algo
            .params(cfg.k, seed)
            .fit(&ds.train.x, cfg.contamination)
            .map_err(|e| e.to_string())?;
        let fitted = Instant::now();
        let scores = det
            .decision_function(&ds.test.x)
            .map_err(|e| e.to_string())?;
        let scored = Instant::now();
        sum.roc += roc_auc(&ds.test.y, &scores).map_err(|e| e.to_string())?;
        sum.precision += precision_at_n(&ds.test.y, &scores).map_err(|e| e.to_string())?;
        sum.fit_ms += (fitted - started).as_secs_f64() * 1e3;
        sum.score_ms += (scored - fitted).as_secs_f64() * 1e3;
    }
    let n = seeds.len() as f64;
    Ok(BenchMetrics {
        roc: sum.roc / n,
        precision: sum.precision / n,
        fit_ms: sum.fit_ms / n,
        score_ms: sum.score_ms / n,
    })
}

/// Runs every (dataset, algorithm) cell; a failing cell does not stop the
/// others. An empty seed list is treated as `[0]`.
pub fn run_benchmark(
    datasets: &[BenchDataset],
    algos: &[Algorithm],
    seeds: &[u64],
    cfg: BenchConfig,
) -> Vec<BenchRow> {
    let seeds = if seeds.is_empty() { &[0][..] } else { seeds };
    datasets
        .iter()
        .flat_map(|ds| {
            algos.iter().map(move |&algo| BenchRow {
                dataset: ds.name.clone(),
                algo,
                outcome: run_cell(ds, algo, seeds, cfg),
            })
        })
        .collect()
}

/// Formats `x` with three significant digits.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 2 - magnitude;
    if decimals >= 0 {
        format!("{x:.*}", decimals as usize)
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{}", (x / scale).round() * scale)
    }
}

pub const COLUMNS: [&str; 6] = ["dataset", "algo", "roc", "prec_at_n", "fit_ms", "score_ms"];

fn cells(row: &BenchRow) -> [String; 6] {
    let (roc, prec, fit, score) = match &row.outcome {
        Ok(m) => (
            format!("{:.4}", m.roc),
            format!("{:.4}", m.precision),
            sig3(m.fit_ms),
            sig3(m.score_ms),
        ),
        Err(_) => (
            "ERROR".into(),
            "ERROR".into(),
            "ERROR".into(),
            "ERROR".into(),
        ),
    };
    [
        row.dataset.clone(),
        row.algo.to_string(),
        roc,
        prec,
        fit,
        score,
    ]
}

pub fn render_table(rows: &[BenchRow]) -> String {
    let body: Vec<[String; 6]> = rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..6)
        .map(|j| {
            body.iter()
                .map(|r| r[j].len())
                .chain([COLUMNS[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j < 2 {
                    format!("{c:<w$}", w = widths[j])
                } else {
                    format!("{c:>w$}", w = widths[j])
                }
            })
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let header: Vec<String> = COLUMNS.iter().map(|s| s.to_string()).collect();
    let mut out = line(&header);
    out.push('\n');
    for r in &body {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&cells(r).join(","));
        out.push('\n');
    }
    out
}
