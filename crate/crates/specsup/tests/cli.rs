//! End-to-end tests of the command-line surface via the built binary.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specsup"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().expect("wait");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_with_stdin(args, "")
}

#[test]
fn construct_then_count_bowties() {
    let (code, g6, _) = run(&["construct", "kplus2", "--n", "14"]);
    assert_eq!(code, 0);
    let (code, csv, _) = run_with_stdin(&["count", "bowties"], &g6);
    assert_eq!(code, 0);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("graph6,value"));
    let row = lines.next().unwrap();
    assert!(row.ends_with(",7"), "expected 7 bowties, got {row}");
}

#[test]
fn count_empty_stdin_is_empty_csv() {
    let (code, csv, _) = run_with_stdin(&["count", "triangles"], "");
    assert_eq!(code, 0);
    assert_eq!(csv, "graph6,value\n");
}

#[test]
fn check_efgg_at_n7() {
    let (code, json, stderr) = run(&["check", "P_EFGG", "--n", "7"]);
    assert_eq!(code, 0, "stderr: {stderr}");
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let p = &v["body"]["predicates"][0];
    assert_eq!(p["predicate"], "P_EFGG");
    assert_eq!(p["fails"], 0);
    // the worst slack is 0, attained by an extremal graph with 13 edges
    assert_eq!(p["worst_slack"], 0.0);
    let g6 = p["worst_slack_graph6"].as_str().unwrap();
    let g = specsup::graph6::decode(g6).unwrap();
    assert_eq!(g.m(), 13, "extremal F2-free size at n=7");
}

#[test]
fn pipe_equality_with_in_process_report() {
    let (code, stream, _) = run(&["enumerate", "--n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(stream.lines().count(), 156);
    let tmp = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(tmp.path(), &stream).unwrap();
    let (c1, piped, _) = run(&["check", "all", "--in", tmp.path().to_str().unwrap()]);
    let (c2, direct, _) = run(&["check", "all", "--n", "6"]);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    let mut v1: serde_json::Value = serde_json::from_str(&piped).unwrap();
    let mut v2: serde_json::Value = serde_json::from_str(&direct).unwrap();
    v1.as_object_mut().unwrap().remove("timing");
    v2.as_object_mut().unwrap().remove("timing");
    assert_eq!(v1, v2, "stream and in-process reports must agree byte-for-byte");
}

#[test]
fn check_reports_failure_with_witness_and_exit_1() {
    // The regular equality counterexample to the stability theorem: the
    // strict check must fail with exit code 1 and the witness on stderr.
    let spec = specsup::construct::EmbeddedBipartiteSpec {
        s: 57,
        t: 57,
        inside_s: vec![(0, 1)],
        inside_t: vec![(0, 1)],
        missing_cross: vec![(0, 0), (1, 1)],
    };
    let g = specsup::construct::build_embedded(&spec).unwrap();
    let g6 = specsup::graph6::encode(&g).unwrap();
    let tmp = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(tmp.path(), format!("{g6}\n")).unwrap();
    let (code, json, stderr) = run(&[
        "check",
        "P_MAIN1",
        "--in",
        tmp.path().to_str().unwrap(),
        "--mode",
        "strict",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains(&g6), "witness must stream to stderr");
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["body"]["total_fails"], 1);
}

#[test]
fn spectral_with_quotient() {
    let (_, g6, _) = run(&["construct", "kplus2", "--n", "10"]);
    let quotient = "0,0,0,0,1,2,2,2,2,2";
    let (code, json, _) =
        run_with_stdin(&["spectral", "--tol", "1e-11", "--quotient", quotient], &g6);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rec = &v["body"][0];
    let lambda = rec["lambda"].as_f64().unwrap();
    let root = rec["largest_root"].as_f64().unwrap();
    assert!((lambda - root).abs() < 1e-8);
    assert_eq!(rec["quotient_matrix"][2][0], 4);
}

#[test]
fn poly_verify_exit_codes() {
    let (code, json, _) = run(&["poly", "verify", "--name", "f", "--n", "10"]);
    assert_eq!(code, 0, "f verifies cleanly: {json}");
    // l6 carries the documented transcription discrepancy
    let (code, json, _) = run(&["poly", "verify", "--name", "l6", "--n", "114"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let disc = v["body"]["discrepancies"].as_array().unwrap();
    assert!(!disc.is_empty());
}

#[test]
fn search_runs_from_config() {
    let cfg = serde_json::json!({
        "n": 8,
        "constraints": [{"counter": "bowties", "max": 0}],
        "schedule": {"t0": 0.6, "cooling": 0.999, "steps": 4000},
        "seed": 5,
        "restarts": 2
    });
    let tmp = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(tmp.path(), cfg.to_string()).unwrap();
    let (code, json, _) = run(&["search", "--config", tmp.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["body"]["constraint_values"]["bowties"], 0);
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, _) = run(&["construct", "nosuchfamily", "--n", "10"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["check", "P_NOPE", "--n", "4"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["check", "all"]); // needs --n or --in
    assert_eq!(code, 2);
}

#[test]
fn workers_env_and_flag_do_not_change_reports() {
    let (_, base, _) = run(&["check", "P_BN", "--n", "6"]);
    let (_, one, _) = run(&["check", "P_BN", "--n", "6", "--workers", "1"]);
    let mut v1: serde_json::Value = serde_json::from_str(&base).unwrap();
    let mut v2: serde_json::Value = serde_json::from_str(&one).unwrap();
    v1.as_object_mut().unwrap().remove("timing");
    v2.as_object_mut().unwrap().remove("timing");
    assert_eq!(v1, v2);
}
