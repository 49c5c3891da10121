use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn oddkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddkit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = oddkit(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn generated(dir: &Path) {
    ok(
        dir,
        &[
            "generate",
            "--n-train",
            "200",
            "--n-test",
            "100",
            "--n-features",
            "2",
            "--contamination",
            "0.1",
            "--out-dir",
            "data",
        ],
    );
}

#[test]
fn generate_writes_four_files_with_tail_outliers() {
    let tmp = tempfile::tempdir().unwrap();
    generated(tmp.path());
    for f in ["X_train.csv", "y_train.csv", "X_test.csv", "y_test.csv"] {
        assert!(tmp.path().join("data").join(f).is_file(), "{f}");
    }
    let y = fs::read_to_string(tmp.path().join("data/y_train.csv")).unwrap();
    let labels: Vec<&str> = y.lines().skip(1).collect();
    assert_eq!(labels.len(), 200);
    assert!(labels[..180].iter().all(|l| *l == "0"));
    assert!(labels[180..].iter().all(|l| *l == "1"));
}

#[test]
fn unknown_algorithm_is_an_argument_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = oddkit(
        tmp.path(),
        &[
            "fit", "--algo", "nosuch", "--input", "x.csv", "--model", "m.json",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("knn") && err.contains("iforest"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_input_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = oddkit(
        tmp.path(),
        &[
            "fit",
            "--algo",
            "knn",
            "--input",
            "absent.csv",
            "--model",
            "m.json",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn score_adds_requested_columns_and_eval_prints_one_line() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generated(dir);
    ok(
        dir,
        &[
            "fit",
            "--algo",
            "abod",
            "--input",
            "data/X_train.csv",
            "--model",
            "abod.json",
        ],
    );
    ok(
        dir,
        &[
            "score",
            "--model",
            "abod.json",
            "--input",
            "data/X_test.csv",
            "--output",
            "s.csv",
            "--labels",
            "--proba",
            "unify",
        ],
    );
    let text = fs::read_to_string(dir.join("s.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("score,label,proba"));
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 3);
        let p: f64 = cells[2].parse().unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
    let stdout = ok(
        dir,
        &[
            "eval",
            "--input",
            "s.csv",
            "--truth",
            "data/y_test.csv",
            "--name",
            "ABOD",
        ],
    );
    assert!(stdout.starts_with("ABOD Performance; ROC: "), "{stdout}");
    assert_eq!(stdout.lines().count(), 1);
}

#[test]
fn model_mismatch_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generated(dir);
    ok(
        dir,
        &[
            "fit",
            "--algo",
            "lof",
            "--input",
            "data/X_train.csv",
            "--model",
            "m.json",
        ],
    );
    fs::write(dir.join("wide.csv"), "1,2,3\n4,5,6\n").unwrap();
    let out = oddkit(
        dir,
        &[
            "score", "--model", "m.json", "--input", "wide.csv", "--output", "s.csv",
        ],
    );
    assert_ne!(out.status.code(), Some(0));
    assert!(!dir.join("s.csv").exists());
}

#[test]
fn plot_needs_two_features() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(dir, &["generate", "--n-features", "3", "--out-dir", "data"]);
    ok(
        dir,
        &[
            "fit",
            "--algo",
            "knn",
            "--input",
            "data/X_test.csv",
            "--model",
            "m.json",
        ],
    );
    let out = oddkit(
        dir,
        &[
            "plot",
            "--input",
            "data/X_test.csv",
            "--truth",
            "data/y_test.csv",
            "--model",
            "m.json",
            "--output",
            "p.svg",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("p.svg").exists());
}

#[test]
fn plot_writes_svg() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generated(dir);
    ok(
        dir,
        &[
            "fit",
            "--algo",
            "iforest",
            "--input",
            "data/X_train.csv",
            "--model",
            "m.json",
        ],
    );
    ok(
        dir,
        &[
            "plot",
            "--input",
            "data/X_test.csv",
            "--truth",
            "data/y_test.csv",
            "--model",
            "m.json",
            "--output",
            "p.svg",
        ],
    );
    let svg = fs::read_to_string(dir.join("p.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"pt ").count(), 100);
}

#[test]
fn combine_requires_buckets_for_bucketed_methods() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("a.csv"), "score\n1\n2\n3\n").unwrap();
    fs::write(dir.join("b.csv"), "score\n3\n1\n2\n").unwrap();
    let out = oddkit(
        dir,
        &[
            "combine", "--input", "a.csv", "b.csv", "--method", "aom", "--output", "c.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    ok(
        dir,
        &[
            "combine", "--input", "a.csv", "b.csv", "--method", "max", "--output", "c.csv",
        ],
    );
    let text = fs::read_to_string(dir.join("c.csv")).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn bench_is_deterministic_and_beats_chance() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let args = [
        "bench",
        "--algos",
        "knn,hbos",
        "--datasets",
        "generated:1,generated:2",
        "--seeds",
        "0,1",
        "--output",
        "b.csv",
    ];
    ok(dir, &args);
    let first = fs::read_to_string(dir.join("b.csv")).unwrap();
    ok(dir, &args);
    let second = fs::read_to_string(dir.join("b.csv")).unwrap();
    let strip = |s: &str| -> Vec<String> {
        // timing columns legitimately vary between runs
        s.lines()
            .map(|l| l.split(',').take(4).collect::<Vec<_>>().join(","))
            .collect()
    };
    assert_eq!(strip(&first), strip(&second));
    let mut lines = first.lines();
    assert_eq!(
        lines.next(),
        Some("dataset,algo,roc,prec_at_n,fit_ms,score_ms")
    );
    for line in lines.filter(|l| l.contains(",knn,")) {
        let roc: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(roc > 0.6, "{line}");
    }
}

#[test]
fn zero_threads_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let out = oddkit(
        tmp.path(),
        &["--threads", "0", "generate", "--out-dir", "d"],
    );
    assert_eq!(out.status.code(), Some(2));
}
