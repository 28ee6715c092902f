use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lpp(args: &[&str], dir: &Path, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lpp"));
    cmd.args(args).current_dir(dir);
    match threads {
        Some(t) => cmd.env("LPP_THREADS", t),
        None => cmd.env_remove("LPP_THREADS"),
    };
    cmd.output().expect("lpp runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("full.json"), r#"{"x":["3/5"],"y":["1/2"]}"#).unwrap();
    fs::write(dir.path().join("half.json"), r#"{"x":["1/2","1/3"],"c":"1/4"}"#).unwrap();
    dir
}

#[test]
fn single_cell_exact_verification_passes() {
    let dir = workspace();
    let out = lpp(
        &["verify", "full", "--path", "RD", "--start", "0,1", "--params", "full.json", "--trunc", "8", "--out", "r.json"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["pass"], true);
    // One cell with q = 3/10: the mass beyond 8 is (3/10)^9.
    assert_eq!(report["truncated_mass"], "19683/1000000000");
    let saved: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(saved, report);
}

#[test]
fn usage_errors_exit_two() {
    let dir = workspace();
    let out = lpp(&["no-such-command"], dir.path(), None);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = lpp(&["verify", "full", "--path", "RD", "--params", "half.json"], dir.path(), None);
    assert_eq!(out.status.code(), Some(2));
    let out = lpp(&["verify", "full", "--path", "RD", "--params", "full.json"], dir.path(), Some("many"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_fuzz_run_passes() {
    let dir = workspace();
    let out = lpp(&["fuzz", "--seed", "1", "--budget", "0"], dir.path(), None);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["properties"], Value::Array(vec![]));
    assert_eq!(report["failures"], Value::Array(vec![]));
}

#[test]
fn flags_override_the_config_file() {
    let dir = workspace();
    fs::write(dir.path().join("cfg.json"), r#"{"params":{"x":["3/5"],"y":["1/2"]},"mode":"mc","samples":20000,"cap":12}"#)
        .unwrap();
    let from_config = lpp(&["verify", "full", "--path", "RD", "--config", "cfg.json", "--seed", "7"], dir.path(), None);
    assert_eq!(from_config.status.code(), Some(0));
    assert_eq!(json(&from_config)["sample_count"], 20000);
    assert_eq!(json(&from_config)["cap"], 12);
    let overridden = lpp(
        &["verify", "full", "--path", "RD", "--config", "cfg.json", "--samples", "500", "--mode", "exact"],
        dir.path(),
        None,
    );
    assert_eq!(json(&overridden)["mode"], "exact-truncated");
    assert_eq!(json(&overridden)["truncation"], 6);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let dir = workspace();
    let args = [
        "verify", "half", "--path", "DD", "--params", "half.json", "--mode", "mc", "--samples", "5000", "--cap", "6",
        "--seed", "11",
    ];
    let one = lpp(&args, dir.path(), Some("1"));
    let four = lpp(&args, dir.path(), Some("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let exact = ["verify", "half", "--path", "RD", "--start", "1,1", "--params", "half.json", "--trunc", "4"];
    assert_eq!(lpp(&exact, dir.path(), Some("1")).stdout, lpp(&exact, dir.path(), Some("3")).stdout);
}

#[test]
fn rsk_output_inverts() {
    let dir = workspace();
    fs::write(dir.path().join("f.json"), r#"{"shape":[2,1],"rows":[[1,2],[3]]}"#).unwrap();
    let fwd = json(&lpp(&["rsk", "--filling", "f.json"], dir.path(), None));
    assert_eq!(fwd["path"]["word"], "RDRD");
    fs::write(dir.path().join("s.json"), fwd["sequence"].to_string()).unwrap();
    let back = lpp(&["rsk-inverse", "--seq", "s.json", "--path", "RDRD"], dir.path(), None);
    assert_eq!(back.status.code(), Some(0));
    let back = json(&back);
    assert_eq!(back["rows"], serde_json::json!([[1, 2], [3]]));
}

#[test]
fn sampled_matrix_feeds_observe() {
    let dir = workspace();
    let w = lpp(&["sample-half", "--params", "half.json", "--size", "2", "--seed", "9"], dir.path(), None);
    fs::write(dir.path().join("w.json"), &w.stdout).unwrap();
    let w = json(&w);
    assert_eq!(w["entries"][0][1], w["entries"][1][0]);
    let obs = json(&lpp(&["observe", "--side", "half", "--path", "DD", "--matrix", "w.json"], dir.path(), None));
    let sampled = json(&lpp(
        &["observe", "--side", "half", "--path", "DD", "--params", "half.json", "--seed", "9"],
        dir.path(),
        None,
    ));
    assert_eq!(obs, sampled);
    assert_eq!(obs["lambdas"].as_array().unwrap().len(), 3);
}

#[test]
fn enumerate_streams_probabilities() {
    let dir = workspace();
    let out = lpp(&["enumerate", "--path", "RD", "--cap", "2", "--params", "full.json"], dir.path(), None);
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let probs: Vec<&str> = lines.iter().map(|l| l["probability"].as_str().unwrap()).collect();
    assert_eq!(probs, ["7/10", "21/100", "63/1000"]);
}

#[test]
fn greene_check_and_layers_report_pass() {
    let dir = workspace();
    let out = lpp(&["greene-check", "--rows", "3", "--cols", "2", "--trials", "30", "--seed", "2"], dir.path(), None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["trials"], 30);
    fs::write(dir.path().join("c.json"), r#"[[{"col":1,"row":2},{"col":1,"row":1},{"col":2,"row":1}]]"#).unwrap();
    let out = lpp(&["layers", "--chains", "c.json", "--lambda", "2,1"], dir.path(), None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["valid"], true);
}
