//! End-to-end checks of the `bwr` binary: each subcommand is exercised
//! against the files shipped in the repository.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn bwr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bwr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn snapshot_arg() -> String {
    repo_file("data/sample_snapshot.json").display().to_string()
}

#[test]
fn route_reports_the_worst_case_estimate() {
    let out = bwr(&[
        "route", "--state", &snapshot_arg(), "--source", "s", "--dest", "t", "--volume", "8",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["router"], "bwrh");
    assert_eq!(v["path"], serde_json::json!(["s", "m1", "m2", "t"]));
    assert!((v["cost"].as_f64().unwrap() - 36.0).abs() <= 1e-9);
    assert!(v["paths_examined"].as_u64().unwrap() >= 1);

    let out = bwr(&[
        "route", "--state", &snapshot_arg(), "--router", "bwrhf", "--source", "s", "--dest",
        "t", "--volume", "8",
    ]);
    let v = stdout_json(&out);
    assert!((v["cost"].as_f64().unwrap() - 55.5).abs() <= 1e-9);
}

#[test]
fn route_rejects_an_unknown_node() {
    let out = bwr(&[
        "route", "--state", &snapshot_arg(), "--source", "nosuch", "--dest", "t", "--volume",
        "1",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown node 'nosuch'"));
}

#[test]
fn oracle_reports_the_exact_worst_case_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("hist.csv");
    let out = bwr(&[
        "oracle", "--state", &snapshot_arg(), "--path", "s,m1,m2,t", "--volume", "8", "--hist",
        hist.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["candidate_path"], serde_json::json!(["s", "m1", "m2", "t"]));
    assert!((v["worst_time"].as_f64().unwrap() - 26.0).abs() <= 1e-9);
    assert!((v["bwrh_bound"].as_f64().unwrap() - 36.0).abs() <= 1e-9);
    assert!((v["bwrhf_bound"].as_f64().unwrap() - 55.5).abs() <= 1e-9);
    let mut order: Vec<u64> = v["witness_order"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    order.sort_unstable();
    assert_eq!(order, vec![1, 2]);
    // Two conflicting flows: the histogram lists both priority orders.
    let text = std::fs::read_to_string(&hist).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "priority_order,new_flow_completion_time");
    assert_eq!(lines.len(), 3);
}

#[test]
fn oracle_routes_the_candidate_when_no_path_is_given() {
    let out = bwr(&[
        "oracle", "--state", &snapshot_arg(), "--source", "s", "--dest", "t", "--volume", "8",
        "--router", "bwrhf",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["candidate_path"], serde_json::json!(["s", "m1", "m2", "t"]));
    let out = bwr(&["oracle", "--state", &snapshot_arg(), "--volume", "8"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--source and --dest"));
}

#[test]
fn validate_accepts_the_shipped_inputs() {
    let out = bwr(&[
        "validate",
        "--topology",
        repo_file("topologies/gscale.json").to_str().unwrap(),
        "--cdf",
        repo_file("data/sample_cdf.csv").to_str().unwrap(),
        "--config",
        repo_file("configs/quick.json").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert_eq!(text.matches(": OK").count(), 3, "{text}");
}

#[test]
fn validate_rejects_a_broken_topology() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"nodes": ["a"], "links": [{"a": "a", "b": "a"}]}"#).unwrap();
    let out = bwr(&["validate", "--topology", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("is invalid"));
}

#[test]
fn simulate_disambiguates_router_by_flag() {
    let config = repo_file("configs/quick.json").display().to_string();
    let out = bwr(&["simulate", "--config", &config]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("pick one with --router"));

    let out = bwr(&["simulate", "--config", &config, "--router", "bwrhf"]);
    let v = stdout_json(&out);
    assert_eq!(v["router"], "bwrhf");
    assert_eq!(v["policy"], "max-min-fair");
    assert_eq!(v["flows"], 40);
    assert!(v["mean_fct"].as_f64().unwrap() > 0.0);
    assert!(v["p99_fct"].as_f64().unwrap() >= v["mean_fct"].as_f64().unwrap());
}

#[test]
fn simulate_writes_single_run_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = bwr(&[
        "simulate",
        "--config",
        repo_file("configs/quick.json").to_str().unwrap(),
        "--router",
        "inv-cap",
        "--rep",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let flows = std::fs::read_to_string(out_dir.join("flows.csv")).unwrap();
    assert_eq!(flows.lines().count(), 41);
    assert_eq!(std::fs::read_to_string(out_dir.join("runs.csv")).unwrap().lines().count(), 2);
    assert_eq!(
        std::fs::read_to_string(out_dir.join("summary.csv")).unwrap().lines().count(),
        2
    );
}

#[test]
fn experiment_writes_csvs_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (first, second) = (dir.path().join("a"), dir.path().join("b"));
    let config = repo_file("configs/quick.json").display().to_string();
    for out_dir in [&first, &second] {
        let out = bwr(&["experiment", "--config", &config, "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8_lossy(&out.stdout).to_string();
        assert!(text.contains("wrote 160 flow rows, 4 runs, 2 summary rows"), "{text}");
    }
    for name in ["flows.csv", "runs.csv", "summary.csv"] {
        let a = std::fs::read(first.join(name)).unwrap();
        let b = std::fs::read(second.join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between reruns");
    }
    let flows = std::fs::read_to_string(first.join("flows.csv")).unwrap();
    assert_eq!(flows.lines().count(), 161);
}

#[test]
fn experiment_seed_flag_changes_the_draws() {
    let dir = tempfile::tempdir().unwrap();
    let (first, second) = (dir.path().join("a"), dir.path().join("b"));
    let config = repo_file("configs/quick.json").display().to_string();
    let out = bwr(&["experiment", "--config", &config, "--out", first.to_str().unwrap()]);
    assert!(out.status.success());
    let out = bwr(&[
        "experiment", "--config", &config, "--seed", "999", "--out",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let a = std::fs::read(first.join("flows.csv")).unwrap();
    let b = std::fs::read(second.join("flows.csv")).unwrap();
    assert_ne!(a, b, "overriding the seed must change the sampled traffic");
}
