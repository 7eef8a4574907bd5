use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn symfem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symfem")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = symfem(&["solve", "--problem", "cubic", "--scheme", "cubic-invariant", "--n", "40", "--out", path_str(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,x,u,exact"));
    assert_eq!(lines.count(), 41);
}

#[test]
fn incompatible_scheme_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = symfem(&["solve", "--problem", "exp", "--scheme", "cubic-invariant", "--n", "10", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unknown_problem_is_a_config_error() {
    let o = symfem(&["converge", "--problem", "heat", "--scheme", "exp-invariant"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn nonpositive_painleve_data_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = symfem(&[
        "solve", "--problem", "painleve", "--scheme", "painleve-noninvariant", "--n", "10",
        "--ux0", "-20", "--startup", "euler", "--out", path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn converge_reports_first_order() {
    let o = symfem(&["converge", "--problem", "exp", "--scheme", "exp-invariant", "--n-list", "20,40,80,160"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    let order: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("fitted order: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((order - 1.0).abs() < 0.1, "order {order}");
}

#[test]
fn invariance_prints_json_report() {
    let o = symfem(&["invariance", "--problem", "cubic", "--scheme", "cubic-invariant", "--seed", "7", "--samples", "20"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["seed"], 7);
    assert!(report["max_drift"].as_f64().unwrap() < 1e-9);
}

#[test]
fn painleve_series_writes_101_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("series.csv");
    let o = symfem(&["painleve-series", "--out", path_str(&out)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("x,err_invariant,err_noninvariant"));
    assert!(text.lines().count() > 100);
}

#[test]
fn burgers_config_run_writes_trajectory_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"nu":0.1,"interval":[-2,4],"n":40,"dt":0.002,"t_end":0.2,"scheme":"galerkin","motion":"fixed",
            "ic":{"type":"traveling_wave","a":0.5,"c":1.0},"boundary":"dirichlet_exact","snapshot_stride":50}"#,
    )
    .unwrap();
    let prefix = dir.path().join("run");
    let o = symfem(&["burgers", "--config", path_str(&cfg), "--out-prefix", path_str(&prefix)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["steps"], 100);
    assert!(summary["final_interior_linf_error"].as_f64().unwrap() < 1e-2);
    let csv = fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,l,x,u"));
}

#[test]
fn burgers_config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"nu":0.1,"viscosity":2}"#).unwrap();
    let o = symfem(&["burgers", "--config", path_str(&cfg), "--out-prefix", path_str(&dir.path().join("x"))]);
    assert_eq!(o.status.code(), Some(2));
}
