//! `oddkit` command-line front end: generate synthetic data, fit and
//! persist detectors, score and evaluate, combine score files, run
//! benchmarks and draw scatter plots.
//!
//! Payload (tables, evaluation lines) goes to stdout and diagnostics to
//! stderr. Exit codes: 0 success, 2 argument error, 3 data or file error.

pub mod bench;
pub mod error;
pub mod model_file;
pub mod plot;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use oddkit_core::io::{
    read_labeled_csv, read_labels_csv, read_matrix_csv, read_table, write_labels_csv,
    write_matrix_csv, write_scores_csv,
};
use oddkit_core::{
    combine, evaluate_format, generate_data, labels_from_scores, threshold_from_scores,
    zscore_standardize, Algorithm, CombineMethod, GenParams, ProbaMethod, ScoreMatrix,
};

use crate::bench::{render_csv, render_table, run_benchmark, BenchConfig, BenchDataset};
use crate::error::{CliError, Result};
use crate::model_file::{load_model, save_model};
use crate::plot::emit_scatter_plot;

#[derive(Debug, Parser)]
#[command(
    name = "oddkit",
    version,
    about = "Batch outlier detection over CSV files"
)]
pub struct Cli {
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write Gaussian-inlier / uniform-outlier train and test splits.
    Generate(GenerateArgs),
    /// Fit a detector on a feature CSV and save the model.
    Fit(FitArgs),
    /// Score a feature CSV with a saved model.
    Score(ScoreArgs),
    /// Print ROC and precision at n for a score file.
    Eval(EvalArgs),
    /// Standardize and merge score columns from several files.
    Combine(CombineArgs),
    /// Compare algorithms on one or more datasets.
    Bench(BenchArgs),
    /// Draw an SVG scatter plot of truth vs prediction for 2-D data.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProbaArg {
    Linear,
    Unify,
}

impl From<ProbaArg> for ProbaMethod {
    fn from(p: ProbaArg) -> Self {
        match p {
            ProbaArg::Linear => ProbaMethod::Linear,
            ProbaArg::Unify => ProbaMethod::Unify,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Average,
    Max,
    Aom,
    Moa,
}

impl From<MethodArg> for CombineMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Average => CombineMethod::Average,
            MethodArg::Max => CombineMethod::Max,
            MethodArg::Aom => CombineMethod::Aom,
            MethodArg::Moa => CombineMethod::Moa,
        }
    }
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse::<Algorithm>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 200)]
    n_train: usize,
    #[arg(long, default_value_t = 100)]
    n_test: usize,
    #[arg(long, default_value_t = 2)]
    n_features: usize,
    #[arg(long, default_value_t = 0.1)]
    contamination: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Receives X_train.csv, y_train.csv, X_test.csv and y_test.csv.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long, value_parser = parse_algorithm)]
    algo: Algorithm,
    /// Train features.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the fitted model.
    #[arg(long)]
    model: PathBuf,
    /// Neighbor count for knn/avgknn/medknn/lof/abod and the base LOF of fb.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    contamination: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional train score output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Add the binary label column to the score output.
    #[arg(long)]
    labels: bool,
    #[arg(long, value_enum)]
    proba: Option<ProbaArg>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    labels: bool,
    #[arg(long, value_enum)]
    proba: Option<ProbaArg>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Score file (`score` column, or a single column).
    #[arg(long)]
    input: PathBuf,
    /// Ground-truth label file.
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, default_value = "Detector")]
    name: String,
}

#[derive(Debug, Args)]
struct CombineArgs {
    /// Score files; each contributes its `score` column, or every column
    /// when it has none.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Bucket count for aom and moa.
    #[arg(long)]
    buckets: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add labels thresholded at the combined scores' contamination quantile.
    #[arg(long)]
    labels: bool,
    #[arg(long, default_value_t = 0.1)]
    contamination: f64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algos: Vec<Algorithm>,
    /// `generated:SEED`, or a directory holding X_train.csv, y_train.csv,
    /// X_test.csv and y_test.csv.
    #[arg(long, value_delimiter = ',', default_value = "generated:0")]
    datasets: Vec<String>,
    /// Detector seeds; metrics are averaged over them.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    contamination: f64,
    #[arg(long, default_value_t = 200)]
    n_train: usize,
    #[arg(long, default_value_t = 100)]
    n_test: usize,
    #[arg(long, default_value_t = 2)]
    n_features: usize,
    /// Optional CSV copy of the table.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// 2-D features.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Predict labels with this model...
    #[arg(long, conflicts_with = "pred", required_unless_present = "pred")]
    model: Option<PathBuf>,
    /// ...or read them from a score file with a `label` column.
    #[arg(long)]
    pred: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_output(argv, &mut std::io::stdout().lock())
}

pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    if cli.threads == Some(0) {
        return Err(CliError::Argument("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Argument(format!("cannot start worker pool: {e}")))?;
    let payload = pool.install(|| match cli.command {
        Command::Generate(a) => generate(a).map(|()| String::new()),
        Command::Fit(a) => fit(a).map(|()| String::new()),
        Command::Score(a) => score(a).map(|()| String::new()),
        Command::Eval(a) => eval(a),
        Command::Combine(a) => combine_files(a).map(|()| String::new()),
        Command::Bench(a) => bench(a),
        Command::Plot(a) => plot(a).map(|()| String::new()),
    })?;
    out.write_all(payload.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn with_path<T>(path: &Path, r: oddkit_core::Result<T>) -> Result<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Argument(m) => CliError::Argument(format!("{}: {m}", path.display())),
        CliError::Data(m) => CliError::Data(format!("{}: {m}", path.display())),
    })
}

fn generate(a: GenerateArgs) -> Result<()> {
    let (train, test) = generate_data(GenParams {
        n_train: a.n_train,
        n_test: a.n_test,
        n_features: a.n_features,
        contamination: a.contamination,
        seed: a.seed,
    })?;
    fs::create_dir_all(&a.out_dir)
        .map_err(|e| CliError::Data(format!("{}: {e}", a.out_dir.display())))?;
    for (name, ds) in [("train", &train), ("test", &test)] {
        let x = a.out_dir.join(format!("X_{name}.csv"));
        let y = a.out_dir.join(format!("y_{name}.csv"));
        with_path(&x, write_matrix_csv(&x, &ds.x))?;
        with_path(&y, write_labels_csv(&y, &ds.y))?;
    }
    eprintln!(
        "wrote {} train and {} test samples to {}",
        train.x.rows(),
        test.x.rows(),
        a.out_dir.display()
    );
    Ok(())
}

fn fit(a: FitArgs) -> Result<()> {
    let train = with_path(&a.input, read_matrix_csv(&a.input))?;
    let det = a.algo.params(a.k, a.seed).fit(&train, a.contamination)?;
    save_model(&det, &a.model)?;
    if let Some(output) = &a.output {
        let labels = a.labels.then(|| det.train_labels());
        let probs = a
            .proba
            .map(|m| det.proba_from_scores(det.train_scores(), m.into()));
        with_path(
            output,
            write_scores_csv(
                output,
                det.train_scores(),
                labels.as_deref(),
                probs.as_deref(),
            ),
        )?;
    }
    eprintln!(
        "fitted {} on {} rows, threshold {}",
        det.algorithm(),
        train.rows(),
        det.threshold()
    );
    Ok(())
}

fn score(a: ScoreArgs) -> Result<()> {
    let det = load_model(&a.model)?;
    let x = with_path(&a.input, read_matrix_csv(&a.input))?;
    let scores = with_path(&a.input, det.decision_function(&x))?;
    let labels = a
        .labels
        .then(|| labels_from_scores(&scores, det.threshold()));
    let probs = a.proba.map(|m| det.proba_from_scores(&scores, m.into()));
    with_path(
        &a.output,
        write_scores_csv(&a.output, &scores, labels.as_deref(), probs.as_deref()),
    )
}

/// The `score` column of a score file, or its only column.
fn read_score_column(path: &Path) -> Result<Vec<f64>> {
    let table = with_path(path, read_table(path))?;
    if let Some(col) = table.column_named("score") {
        return Ok(col);
    }
    if table.data.cols() == 1 {
        return Ok(table.data.column(0));
    }
    Err(CliError::Data(format!(
        "{}: expected a 'score' column or a single column",
        path.display()
    )))
}

fn eval(a: EvalArgs) -> Result<String> {
    let scores = read_score_column(&a.input)?;
    let truth = with_path(&a.truth, read_labels_csv(&a.truth))?;
    if truth.len() != scores.len() {
        return Err(CliError::Data(format!(
            "{} labels but {} scores",
            truth.len(),
            scores.len()
        )));
    }
    let line =
        evaluate_format(&a.name, &truth, &scores).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(format!("{line}\n"))
}

fn combine_files(a: CombineArgs) -> Result<()> {
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for path in &a.input {
        let table = with_path(path, read_table(path))?;
        match table.column_named("score") {
            Some(col) => columns.push(col),
            None => columns.extend((0..table.data.cols()).map(|j| table.data.column(j))),
        }
    }
    let matrix = ScoreMatrix::from_columns(&columns).map_err(|e| CliError::Data(e.to_string()))?;
    let method: CombineMethod = a.method.into();
    let buckets = match (method, a.buckets) {
        (CombineMethod::Aom | CombineMethod::Moa, None) => {
            return Err(CliError::Argument(
                "--buckets is required for aom and moa".into(),
            ))
        }
        (_, b) => b.unwrap_or(1),
    };
    let combined = combine(&zscore_standardize(&matrix), method, buckets, a.seed)?;
    let labels = if a.labels {
        let t = threshold_from_scores(&combined, a.contamination)?;
        Some(labels_from_scores(&combined, t))
    } else {
        None
    };
    with_path(
        &a.output,
        write_scores_csv(&a.output, &combined, labels.as_deref(), None),
    )
}

fn load_bench_dataset(spec: &str, a: &BenchArgs) -> Result<BenchDataset> {
    if let Some(seed) = spec.strip_prefix("generated:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::Argument(format!("bad dataset seed in '{spec}'")))?;
        let (train, test) = generate_data(GenParams {
            n_train: a.n_train,
            n_test: a.n_test,
            n_features: a.n_features,
            contamination: a.contamination,
            seed,
        })?;
        return Ok(BenchDataset {
            name: spec.to_string(),
            train,
            test,
        });
    }
    let dir = Path::new(spec);
    let pair = |split: &str| {
        let x = dir.join(format!("X_{split}.csv"));
        let y = dir.join(format!("y_{split}.csv"));
        with_path(&x, read_labeled_csv(&x, &y))
    };
    Ok(BenchDataset {
        name: spec.to_string(),
        train: pair("train")?,
        test: pair("test")?,
    })
}

fn bench(a: BenchArgs) -> Result<String> {
    let algos = if a.algos.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        a.algos.clone()
    };
    let datasets = a
        .datasets
        .iter()
        .map(|spec| load_bench_dataset(spec, &a))
        .collect::<Result<Vec<_>>>()?;
    let cfg = BenchConfig {
        k: a.k,
        contamination: a.contamination,
    };
    let rows = run_benchmark(&datasets, &algos, &a.seeds, cfg);
    for row in &rows {
        if let Err(msg) = &row.outcome {
            eprintln!("{} / {}: {msg}", row.dataset, row.algo);
        }
    }
    if let Some(path) = &a.output {
        fs::write(path, render_csv(&rows))
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(render_table(&rows))
}

fn plot(a: PlotArgs) -> Result<()> {
    let x = with_path(&a.input, read_matrix_csv(&a.input))?;
    if x.cols() != 2 {
        return Err(CliError::Argument(format!(
            "plot needs exactly 2 features, {} has {}",
            a.input.display(),
            x.cols()
        )));
    }
    let truth = with_path(&a.truth, read_labels_csv(&a.truth))?;
    let predicted = match (&a.model, &a.pred) {
        (Some(model), _) => load_model(model)?.predict(&x)?,
        (None, Some(pred)) => with_path(pred, read_labels_csv(pred))?,
        (None, None) => return Err(CliError::Argument("plot needs --model or --pred".into())),
    };
    emit_scatter_plot(&x, &truth, &predicted, &a.output)
}
