use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lrs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrs")).args(args).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn gr9_code(dir: &Path, k: &str) -> String {
    let path = dir.join(format!("code{k}.json"));
    let out = lrs(&[
        "gen", "--p", "3", "--r", "2", "--g", "y", "--h", "z^2+1", "--partition", "2,2", "--k", k, "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_writes_a_loadable_spec() {
    let dir = tempfile::tempdir().unwrap();
    let code = gr9_code(dir.path(), "2");
    let spec: Value = serde_json::from_str(&std::fs::read_to_string(&code).unwrap()).unwrap();
    assert_eq!(spec["format"], 1);
    assert_eq!(spec["partition"], serde_json::json!([2, 2]));
    assert_eq!(spec["points"]["a"].as_array().unwrap().len(), 2);
}

#[test]
fn gen_reports_construction_errors() {
    let out = lrs(&["gen", "--p", "2", "--r", "2", "--h", "z^2+z+1", "--partition", "2,2", "--k", "2", "--points", "coprime"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERR:NotCoprime:"));
    let out = lrs(&["gen", "--p", "3", "--r", "2", "--h", "z^2+1", "--partition", "2,2", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERR:BadDimension:"));
    // the residues of 1 and 2 are conjugate in F_9
    let out = lrs(&["gen", "--p", "3", "--r", "2", "--h", "z^2+1", "--partition", "2,2", "--k", "2", "--points", "coprime"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERR:ValidationFailed:"));
}

#[test]
fn encode_first_row_and_decode_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let code = gr9_code(dir.path(), "2");
    let out = lrs(&["encode", "--code", &code, "--msg", "[1,0]"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let c: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(c, serde_json::json!([[[1], [0]], [[0], [1]], [[1], [0]], [[0], [1]]]));

    let rx = dir.path().join("rx.json");
    std::fs::write(&rx, serde_json::to_string(&c).unwrap()).unwrap();
    let res = dir.path().join("res.json");
    let out = lrs(&["decode", "--code", &code, "--rx", rx.to_str().unwrap(), "--out", res.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&res).unwrap()).unwrap();
    assert_eq!(doc["status"], "success");
    assert_eq!(doc["error_weight"], 0);
    assert_eq!(doc["message"], serde_json::json!([[[1], [0]], [[0], [0]]]));
}

#[test]
fn decode_corrects_a_rank_one_error() {
    let dir = tempfile::tempdir().unwrap();
    let code = gr9_code(dir.path(), "2");
    // codeword of msg (1, 0) plus (1 + ξ) · (1, 3) in the first block
    let rx = "[[[2],[1]], [[3],[4]], 1, [0,1]]";
    let out = lrs(&["decode", "--code", &code, "--rx", rx]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "success");
    assert_eq!(doc["error_weight"], 1);
    assert_eq!(doc["message"], serde_json::json!([[[1], [0]], [[0], [0]]]));
}

#[test]
fn decode_failure_is_not_a_tool_error() {
    let dir = tempfile::tempdir().unwrap();
    let code = gr9_code(dir.path(), "3");
    let out = lrs(&["decode", "--code", &code, "--rx", "[1, [0,1], 0, 1]"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["status"] == "failure" || doc["error_weight"].as_u64() == Some(0));
    let out = lrs(&["decode", "--code", &code, "--rx", "[1, 2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERR:DimensionMismatch:"));
}

#[test]
fn simulate_appends_deterministic_rows() {
    let dir = tempfile::tempdir().unwrap();
    let code = gr9_code(dir.path(), "2");
    let csv = dir.path().join("sim.csv");
    let csv = csv.to_str().unwrap();
    for _ in 0..2 {
        let out = lrs(&["simulate", "--code", &code, "--t", "1", "--rho", "0", "--trials", "200", "--seed", "7", "--csv", csv]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let mut reader = csv::Reader::from_path(csv).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["p", "r", "s", "m", "partition", "k", "t", "rho", "trials", "successes", "failures", "miscorrections", "rate", "seconds"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(&row[4], "2+2");
        assert_eq!(&row[9], "200");
        assert_eq!(&row[12], "0.5");
    }
    assert_eq!(rows[0].iter().take(13).collect::<Vec<_>>(), rows[1].iter().take(13).collect::<Vec<_>>());

    let out = lrs(&["simulate", "--code", &code, "--t", "0", "--trials", "10", "--json"]);
    let row: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(row["successes"], 10);
}

#[test]
fn simulate_guards_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let code = gr9_code(dir.path(), "2");
    let out = lrs(&["simulate", "--code", &code, "--t", "2", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERR:BoundViolated:"));
    let log = dir.path().join("log.jsonl");
    let out = lrs(&["simulate", "--code", &code, "--t", "2", "--trials", "5", "--stress", "--log", log.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let lines = std::fs::read_to_string(&log).unwrap();
    assert_eq!(lines.lines().count(), 5);
    for line in lines.lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        assert!(rec["outcome"].is_string());
    }
}

#[test]
fn malformed_inputs_exit_with_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = lrs(&["encode", "--code", bad.to_str().unwrap(), "--msg", "[1]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERR:Parse:"));
    let out = lrs(&["gen", "--p", "3", "--r", "2", "--h", "z^2+x", "--partition", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERR:Parse:"));
}

#[test]
fn selftest_quick_passes() {
    let out = lrs(&["selftest", "--level", "quick", "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let results: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = results.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"sigma-order"));
}
