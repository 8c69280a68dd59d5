use std::path::Path;
use std::process::{Command, Output};

use softnull::channels::{load_trace, trace_from_json};

fn softnull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softnull")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn budget_reproduces_worked_examples() {
    let cases = [
        (["--tx", "0", "--pl", "80", "--supp", "20", "--thermal", "-90", "--dr", "40"], "-20.0 dB"),
        (["--tx", "0", "--pl", "80", "--supp", "50", "--thermal", "-90", "--dr", "40"], "10.0 dB"),
        (["--tx", "0", "--pl", "100", "--supp", "70", "--thermal", "-90", "--dr", "40"], "10.0 dB"),
    ];
    for (args, expected) in cases {
        let mut argv = vec!["budget"];
        argv.extend(args);
        argv.extend(["--mode", "dominant"]);
        let o = softnull(&argv);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), expected);
    }
}

#[test]
fn unknown_flag_prints_usage() {
    let o = softnull(&["suppression", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn help_succeeds() {
    let o = softnull(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("suppression"));
}

#[test]
fn missing_config_is_a_config_error() {
    let o = softnull(&["rates", "--config", "/nonexistent/softnull.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("softnull.toml"));
}

#[test]
fn invalid_config_value_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "m_tx = 0\n").unwrap();
    let o = softnull(&["suppression", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("m_tx"));
}

#[test]
fn mismatched_trace_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("small.snt");
    let gen = softnull(&["trace", "generate", "--m-tx", "30", "--trials", "1", "--output", path(&trace)]);
    assert_eq!(gen.status.code(), Some(0), "{}", stderr(&gen));
    let o = softnull(&["suppression", "--trace", path(&trace)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("42x30"), "{}", stderr(&o));
}

#[test]
fn missing_trace_is_a_config_error() {
    let o = softnull(&["suppression", "--trace", "/nonexistent/h.snt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn trace_generate_inspect_convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("h.snt");
    let json = dir.path().join("h.json");
    let back = dir.path().join("back.snt");
    let gen = softnull(&["trace", "generate", "--trials", "2", "--subcarriers", "3", "--users", "2", "--output", path(&bin)]);
    assert_eq!(gen.status.code(), Some(0), "{}", stderr(&gen));

    let info = stdout(&softnull(&["trace", "inspect", path(&bin)]));
    assert!(info.contains("subcarriers: 6"));
    assert!(info.contains("m_rx: 36"));
    assert!(info.contains("k_up: 2"));
    assert!(info.contains("meta.seed: 1"));

    assert_eq!(softnull(&["trace", "convert", path(&bin), path(&json)]).status.code(), Some(0));
    assert_eq!(softnull(&["trace", "convert", path(&json), path(&back)]).status.code(), Some(0));
    let original = load_trace(&bin).unwrap();
    assert_eq!(trace_from_json(&std::fs::read_to_string(&json).unwrap()).unwrap(), original);
    assert_eq!(std::fs::read(&bin).unwrap(), std::fs::read(&back).unwrap());
}

#[test]
fn trace_source_feeds_suppression() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("h.snt");
    let gen = softnull(&["trace", "generate", "--trials", "2", "--output", path(&trace)]);
    assert_eq!(gen.status.code(), Some(0));
    let from_trace = softnull(&["suppression", "--trace", path(&trace), "--d-tx", "4,36"]);
    assert_eq!(from_trace.status.code(), Some(0), "{}", stderr(&from_trace));
    let synthetic = softnull(&["suppression", "--trials", "2", "--d-tx", "4,36"]);
    assert_eq!(stdout(&from_trace), stdout(&synthetic));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out.json");
    std::fs::write(&cfg, "rows = 3\ncols = 4\nm_tx = 6\nusers = [2]\nn_trials = 2\n").unwrap();
    let o = softnull(&["rates", "--config", path(&cfg), "--seed", "5", "--format", "json", "--output", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let records: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 5 * 3);
    assert_eq!(records[0]["users"], 2);
}
