use std::path::Path;
use std::process::{Command, Output};

use logchol::SpdMatrix;
use logchol_lab::glyph::read_glyphs;
use logchol_lab::report::ExperimentReport;

fn logchol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logchol")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> ExperimentReport {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    ExperimentReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        &["bench-transport", "--reps", "0"][..],
        &["interpolate", "--metric", "bures"],
        &["interpolate", "--steps", "1"],
        &["mean", "--input", "builtin:missing"],
        &["mean", "--input", "/definitely/not/here.txt"],
        &["stability", "--kappa", "0.5"],
        &["frobnicate"],
    ] {
        assert_eq!(logchol(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let out = logchol(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("mean-gap"));
}

#[test]
fn indefinite_input_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "2\n1 2\n2 1\n").unwrap();
    let out = logchol(&["mean", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mean_of_fixture_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.txt");
    std::fs::write(&path, "# two matrices\n2\n4 2\n2 5\n\n2\n1 0\n0 1\n").unwrap();
    for metric in ["euclidean", "cholesky", "log-euclidean", "affine-invariant", "log-cholesky"] {
        let r = report(&logchol(&["mean", "--metric", metric, "--input", path.to_str().unwrap()]));
        assert_eq!(r.environment.m, 2);
        assert_eq!(r.flag("within_det_bounds", Some(metric)), Some(true), "{metric}");
        if metric != "euclidean" && metric != "cholesky" {
            assert!(r.number("det_gap", Some(metric)).unwrap() < 1e-8, "{metric}");
        }
    }
}

#[test]
fn swelling_fixture_through_the_cli() {
    let r = report(&logchol(&["interpolate", "--metric", "cholesky", "--steps", "3", "--input", "builtin:swelling"]));
    let dets = r.sequence("det", Some("cholesky")).unwrap();
    assert!((dets[1] - 0.09150625).abs() < 1e-12);
}

#[test]
fn glyphs_and_csv_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let glyphs = dir.path().join("g.jsonl");
    let csv = dir.path().join("r.csv");
    let out = logchol(&[
        "interpolate",
        "--metric",
        "all",
        "--glyphs",
        glyphs.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let records = read_glyphs(&std::fs::read_to_string(&glyphs).unwrap()).unwrap();
    assert_eq!(records.len(), 5 * 11);
    for g in &records {
        assert!(g.is_valid());
        let m = g.eigenvalues.len();
        let dense = nalgebra::DMatrix::from_fn(m, m, |r, c| {
            (0..m).map(|k| g.eigenvectors[r * m + k] * g.eigenvalues[k] * g.eigenvectors[c * m + k]).sum()
        });
        assert!(SpdMatrix::from_dense(&dense).is_ok());
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("name,metric,index,value,units,tolerance\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("det,")).count(), 5 * 11);
}

#[test]
fn reports_round_trip_through_the_parser() {
    let out = logchol(&["stability", "--kappa", "1e15", "--seed", "2"]);
    let r = report(&out);
    assert_eq!(r.to_json().unwrap(), String::from_utf8(out.stdout).unwrap());
    assert_eq!(r.schema_version, logchol_lab::report::SCHEMA_VERSION);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["mean-gap", "--trials", "3", "--seed", "4"];
    let stdout = logchol(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(logchol(&with_out).status.success());
    assert_eq!(std::fs::read(Path::new(&path)).unwrap(), stdout);
}
