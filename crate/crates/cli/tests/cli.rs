use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hidden_partition::cluster::Partition;
use hidden_partition::model::Graph;

fn hidpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hidpart")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const BIPARTITION: &str = r#"{
    "scenario": "bipartition",
    "scenario_params": {"n": 200, "p": 0.8, "q": 0.1},
    "algorithm": "svd2",
    "trials": 3,
    "base_seed": 42,
    "success_metric": "exact"
}"#;

fn without_timing(text: &str) -> Vec<serde_json::Value> {
    text.lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            if let Some(o) = v.as_object_mut() {
                o.remove("wall_time_ms");
                if let Some(s) = o.get_mut("summary").and_then(|s| s.as_object_mut()) {
                    s.remove("mean_time_ms");
                }
            }
            v
        })
        .collect()
}

#[test]
fn run_writes_records_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.json", BIPARTITION);
    let out = hidpart(&["run", "--config", &config]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines = without_timing(&stdout);
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["seed"], 42);
    assert_eq!(lines[2]["trial_index"], 2);
    assert_eq!(lines[3]["summary"]["trials"], 3);

    let again = hidpart(&["run", "--config", &config]);
    assert_eq!(without_timing(&String::from_utf8(again.stdout).unwrap()), lines);
}

#[test]
fn run_overrides_and_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.json", BIPARTITION);
    let target = dir.path().join("out.csv");
    let out = hidpart(&[
        "run", "--config", &config, "--seed", "7", "--trials", "2", "--format", "csv", "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&target).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "trial,seed,success,misclassified,time_ms,degenerate_gap");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0,7,"));
    assert!(lines[2].starts_with("1,8,"));
}

#[test]
fn failed_criterion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.json",
        r#"{"scenario": "bipartition", "scenario_params": {"n": 100, "p": 0.5, "q": 0.5},
            "algorithm": "svd2", "trials": 3, "min_success_rate": 1.0}"#,
    );
    assert_eq!(hidpart(&["run", "--config", &config]).status.code(), Some(1));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write_config(dir.path(), "bad.json", r#"{"scenario": "clique"}"#);
    assert_eq!(hidpart(&["run", "--config", &broken]).status.code(), Some(2));
    assert_eq!(hidpart(&["run", "--config", "/nonexistent/c.json"]).status.code(), Some(2));
    let config = write_config(dir.path(), "c.json", BIPARTITION);
    assert_eq!(hidpart(&["run", "--config", &config, "--trials", "0"]).status.code(), Some(2));
    assert_eq!(
        hidpart(&["sweep", "--config", &config, "--axis", "s", "--values", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(hidpart(&["diag", "no_such_check"]).status.code(), Some(2));
    assert_eq!(hidpart(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_emits_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.json", BIPARTITION);
    let out = hidpart(&["sweep", "--config", &config, "--axis", "q", "--values", "0.7,0.1", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = without_timing(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["axis"], "q");
    assert_eq!(rows[1]["value"], 0.1);
    assert_eq!(rows[1]["success_rate"], 1.0);
}

#[test]
fn diag_reports() {
    let out = hidpart(&["diag", "davis_kahan", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(report["check"], "davis_kahan");
    assert_eq!(report["pass"], true);

    let out = hidpart(&["diag", "davis_kahan", "--format", "csv"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("check,n,samples,"));
}

#[test]
fn gen_writes_edge_list_and_truth() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.json", BIPARTITION);
    let edges = dir.path().join("g.txt");
    let truth = dir.path().join("t.txt");
    let out = hidpart(&[
        "gen", "--config", &config, "--seed", "5", "--out", edges.to_str().unwrap(), "--truth",
        truth.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let graph = Graph::from_edge_list(&fs::read_to_string(&edges).unwrap()).unwrap();
    assert_eq!(graph.n(), 200);
    assert_eq!(graph.seed(), 5);
    let planted = Partition::from_text(&fs::read_to_string(&truth).unwrap()).unwrap();
    assert_eq!(planted.len(), 200);
    assert_eq!(planted.num_clusters(), 2);
}
