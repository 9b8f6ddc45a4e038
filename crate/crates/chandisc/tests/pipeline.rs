// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end pipeline runs: the artifact directory layout, the failure
//! marker contract, mixing, and whole-directory determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chandisc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn file_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("file exists"))
        .expect("file is JSON")
}

const ARTIFACTS: [&str; 7] = [
    "detection.json",
    "constructed.json",
    "verification.json",
    "report.json",
    "simulation.json",
    "summary.txt",
    "summary.csv",
];

#[test]
fn full_run_writes_every_artifact_with_consistent_figures() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["state", "make", "--kind", "bell", "--out", "bell.json"])
        .status
        .success());
    let out = run_in(
        dir.path(),
        &["pipeline", "bell.json", "--out-dir", "run", "--shots", "20000", "--seed", "2"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let run = dir.path().join("run");
    for name in ARTIFACTS {
        assert!(run.join(name).exists(), "missing {name}");
    }
    assert!(!run.join("FAILED").exists());

    let detection = file_json(&run.join("detection.json"));
    assert_eq!(detection["data"]["map"]["name"], "transpose");
    let verification = file_json(&run.join("verification.json"));
    assert_eq!(verification["data"]["passed"], true);
    let report = file_json(&run.join("report.json"));
    let advantage = report["data"]["base"]["advantage"].as_f64().unwrap();
    assert!((advantage - 2.0 / 3.0).abs() < 1e-8);
    let simulation = file_json(&run.join("simulation.json"));
    assert!(simulation["data"]["simulation"]["successRate"].as_f64().unwrap() > 0.99);

    let csv = std::fs::read_to_string(run.join("summary.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[0], "transpose");
    assert_eq!(cells[2], "6.66666666667e-1");
    assert_eq!(cells[3], "5.00000000000e-1");

    let text = std::fs::read_to_string(run.join("summary.txt")).unwrap();
    assert!(text.contains("route: transpose"));
    assert!(text.contains("advantage: 6.66666666667e-1"));
}

#[test]
fn failed_runs_keep_partial_artifacts_and_a_marker() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(
        dir.path(),
        &["state", "make", "--kind", "separable", "--dims", "2,2", "--out", "sep.json"],
    )
    .status
    .success());
    let out = run_in(dir.path(), &["pipeline", "sep.json", "--out-dir", "run"]);
    assert_eq!(out.status.code(), Some(1));
    let run = dir.path().join("run");
    assert!(run.join("detection.json").exists());
    assert!(!run.join("constructed.json").exists());

    let marker = file_json(&run.join("FAILED"));
    assert_eq!(marker["stage"], "detect");
    assert_eq!(marker["error"], "NotDetected");

    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"], "NotDetected");
}

#[test]
fn undetectable_isotropic_states_fail_at_the_detect_stage() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(
        dir.path(),
        &["state", "make", "--kind", "isotropic", "--visibility", "0.2", "--out", "iso.json"],
    )
    .status
    .success());
    let out = run_in(dir.path(), &["pipeline", "iso.json", "--out-dir", "run"]);
    assert_eq!(out.status.code(), Some(1));
    let detection = file_json(&dir.path().join("run/detection.json"));
    assert_eq!(detection["data"]["detected"], false);
}

#[test]
fn mixing_adds_a_second_summary_row_with_scaled_figures() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["state", "make", "--kind", "bell", "--out", "bell.json"])
        .status
        .success());
    let out = run_in(
        dir.path(),
        &["pipeline", "bell.json", "--out-dir", "run", "--eb", "0.5", "--shots", "2000"],
    );
    assert!(out.status.success());
    let constructed = file_json(&dir.path().join("run/constructed.json"));
    assert_eq!(constructed["data"]["eb"]["p"].as_f64().unwrap(), 0.5);
    let report = file_json(&dir.path().join("run/report.json"));
    let base = report["data"]["base"]["advantage"].as_f64().unwrap();
    let mixed = report["data"]["eb"]["advantage"].as_f64().unwrap();
    assert!((mixed - 0.5 * base).abs() < 1e-9);

    let csv = std::fs::read_to_string(dir.path().join("run/summary.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("eb,5.00000000000e-1"));
}

#[test]
fn pipeline_directories_are_deterministic_without_timestamps() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [dir_a.path(), dir_b.path()] {
        assert!(run_in(dir, &["state", "make", "--kind", "bell", "--out", "bell.json"])
            .status
            .success());
        let out = run_in(
            dir,
            &[
                "--no-timestamp",
                "--seed",
                "7",
                "pipeline",
                "bell.json",
                "--out-dir",
                "run",
                "--shots",
                "5000",
            ],
        );
        assert!(out.status.success());
    }
    for name in ARTIFACTS {
        let a = std::fs::read(dir_a.path().join("run").join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join("run").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn out_dir_falls_back_to_the_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["state", "make", "--kind", "bell", "--out", "bell.json"])
        .status
        .success());
    let out = Command::new(env!("CARGO_BIN_EXE_chandisc"))
        .args(["pipeline", "bell.json", "--shots", "1000"])
        .current_dir(dir.path())
        .env("CHANDISC_OUT_DIR", "env-run")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(dir.path().join("env-run/summary.txt").exists());
}
