//! End-to-end tests of the command-line binary: formats, exit codes,
//! determinism of emitted files.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rittcalc")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write_identity(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("identity.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}"#,
    )
    .unwrap();
    path
}

#[test]
fn analyze_identity_profile() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_identity(dir.path());
    let out = run(&["analyze", matrix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let profile: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((profile["c_tr"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((profile["pb"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((profile["c1"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn fcalc_matches_horner_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("t.json");
    std::fs::write(
        &matrix,
        r#"{"dim": 2, "entries": [[0.9, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]}"#,
    )
    .unwrap();
    let poly = dir.path().join("p.json");
    std::fs::write(&poly, r#"{"m": 1, "coeffs": [[1.0, 0.0], [0.5, 0.0], [0.25, 0.0]]}"#).unwrap();
    let out = run(&[
        "fcalc",
        matrix.to_str().unwrap(),
        "--poly",
        poly.to_str().unwrap(),
        "--tol",
        "1e-10",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let deviation = v["diagnostics"]["horner_deviation"].as_f64().unwrap();
    assert!(deviation < 1e-8, "deviation {deviation}");
    let entries = v["matrix"]["entries"].as_array().unwrap();
    // p(z) = z + 0.5 z^2 + 0.25 z^3; entry (0,0) is p(0.9)
    let expect = 0.9 + 0.5 * 0.81 + 0.25 * 0.729;
    assert!((entries[0][0].as_f64().unwrap() - expect).abs() < 1e-8);
}

#[test]
fn verify_emits_reports_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("reports.csv");
    let out = run(&[
        "verify",
        "sqfe",
        "--seed",
        "3",
        "--out",
        out_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,lhs,rhs,margin,pass,inputs"));
    assert!(lines.next().is_some());
    assert!(text.contains("sqfe_lemma"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_identity(dir.path());
    // unknown suite
    let out = run(&["verify", "does-not-exist"]);
    assert_eq!(out.status.code(), Some(2));
    // missing file
    let out = run(&["analyze", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // grid below the documented floor
    let out = run(&["analyze", matrix.to_str().unwrap(), "--grid", "8"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed matrix file
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2, \"entries\": [[1.0").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error at byte"));
}

#[test]
fn numerical_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // spectral radius 2: not a Tadmor-Ritt candidate
    let matrix = dir.path().join("big.json");
    std::fs::write(
        &matrix,
        r#"{"dim": 1, "entries": [[2.0, 0.0]]}"#,
    )
    .unwrap();
    let out = run(&["analyze", matrix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn matrix_market_input_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("t.mtx");
    std::fs::write(
        &matrix,
        "%%MatrixMarket matrix coordinate complex general\n2 2 2\n1 1 0.5 0.0\n2 2 0.25 0.0\n",
    )
    .unwrap();
    let out = run(&["analyze", matrix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_reports_search_below_bound() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_identity(dir.path());
    let out_path = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        matrix.to_str().unwrap(),
        "--n-max",
        "16",
        "--out",
        out_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.lines().count() > 3);
    assert!(!text.contains(",false,"));
}

#[test]
fn besov_command_passes_on_identity() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_identity(dir.path());
    let poly = dir.path().join("p.json");
    std::fs::write(&poly, r#"{"m": 0, "coeffs": [[1.0, 0.0], [0.0, 0.0], [2.0, 0.0]]}"#).unwrap();
    let out = run(&[
        "besov",
        matrix.to_str().unwrap(),
        "--poly",
        poly.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("besov_calculus"));
}

#[test]
fn repeated_runs_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_identity(dir.path());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let res = run(&[
            "analyze",
            matrix.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn threads_env_validated() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_identity(dir.path());
    let out = Command::new(bin())
        .args(["analyze", matrix.to_str().unwrap()])
        .env("RITTCALC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin())
        .args(["analyze", matrix.to_str().unwrap()])
        .env("RITTCALC_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}
