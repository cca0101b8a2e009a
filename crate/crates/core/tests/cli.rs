use std::path::PathBuf;
use std::process::{Command, Output};

fn delpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("delpair-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn theta_prints_json() {
    let out = delpair(&["theta", "--tau", "0.3+1.2i", "--z", "0.1-0.2i", "--char", "1/2,1/2", "--grad"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["tail_bound"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["gradient"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(delpair(&["verify", "reciprocity1", "--tau", "i"]).status.code(), Some(0));
    assert_eq!(delpair(&["verify", "reciprocity1", "--tau", "i", "--tol", "1e-30"]).status.code(), Some(1));
    assert_eq!(delpair(&["verify", "flatness", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(delpair(&["verify", "no-such-check"]).status.code(), Some(2));
    assert_eq!(delpair(&["theta", "--tau", "i", "--z", "1,2"]).status.code(), Some(2));
}

#[test]
fn skipped_oracle_does_not_fail() {
    let out = delpair(&["verify", "torsion-oracle", "--tau", "i"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("SKIP"));
}

#[test]
fn merged_report_keeps_every_check() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    let merged = scratch("merged.json");
    for (check, path) in [("curvature", &a), ("reciprocity2", &b)] {
        let out = delpair(&["verify", check, "--json-out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let out = delpair(&[
        "report",
        "--merge",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--out",
        merged.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let suite: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&merged).unwrap()).unwrap();
    assert_eq!(suite["pass"], true);
    let checks: Vec<_> = suite["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["task"]["check"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(checks, ["reciprocity2", "curvature"]);
}
