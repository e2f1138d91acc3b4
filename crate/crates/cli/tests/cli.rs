use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fraccover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraccover")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn check_covered_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let out = fraccover(&["check-covered", &c4, "--a", "1", "--b", "1", "--crosscheck"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["oracle_covered"], true);

    let star = write(dir.path(), "star.txt", "3 2\n0 1\n0 2\n");
    let out = fraccover(&["check-covered", &star, "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["covered"], false);
    assert_eq!(v["S"], serde_json::json!([0]));

    let broken = write(dir.path(), "bad.txt", "3 1\n0 7\n");
    let out = fraccover(&["check-covered", &broken, "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = fraccover(&["check-covered", &c4, "--a", "2", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extremal_graph_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("ext.g6").display().to_string();
    let out = fraccover(&["gen-extremal", "--a", "2", "--b", "3", "--k", "0", "--t", "7", "--out", &f, "--format", "graph6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["n"], 11);
    let out = fraccover(&["check-covered", &f, "--a", "2", "--b", "3", "--crosscheck"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!((v["theta"].as_i64(), v["epsilon"].as_i64()), (Some(1), Some(2)));
    assert_eq!(v["oracle_covered"], false);

    let out = fraccover(&["check-hypothesis", &f, "--a", "2", "--b", "3", "--condition", "disjunctive"]);
    assert_eq!(out.status.code(), Some(0));
    let out = fraccover(&["check-hypothesis", &f, "--a", "2", "--b", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violating_X"], serde_json::json!([3, 4, 5, 6, 7, 8, 9]));
}

#[test]
fn gen_extremal_rejects_invalid_t() {
    let out = fraccover(&["gen-extremal", "--a", "2", "--b", "3", "--t", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("smallest larger valid t is 13"));
    let out = fraccover(&["gen-extremal", "--r", "2", "--t", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no valid t"));
}

#[test]
fn hypothesis_on_complete_graph() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("11 55\n");
    for u in 0..11 {
        for v in u + 1..11 {
            text.push_str(&format!("{u} {v}\n"));
        }
    }
    let k11 = write(dir.path(), "k11.txt", &text);
    let out = fraccover(&["check-hypothesis", &k11, "--a", "2", "--b", "3", "--k", "0", "--profile"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["holds"].as_bool(), v["threshold"].as_u64()), (Some(true), Some(7)));
    assert_eq!(v["ratio"], "10/7");
    assert_eq!(v["profile"]["1"], 10);

    let out = fraccover(&["check-hypothesis", &k11, "--a", "2", "--b", "3", "--k", "1", "--corollary1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fraccover(&["check-hypothesis", &k11, "--r", "3", "--corollary3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!((json(&out)["a"].as_u64(), json(&out)["k"].as_u64()), (Some(3), Some(0)));
}

#[test]
fn sharpness_report_with_deletion() {
    let out = fraccover(&["sharpness", "--a", "2", "--b", "3", "--k", "1", "--t", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["theta"].as_i64(), v["epsilon"].as_i64(), v["n"].as_u64()), (Some(1), Some(2), Some(12)));
    assert_eq!(v["hypothesis_holds"], true);
    assert_eq!(v["criterion_covered"], false);
}

#[test]
fn factor_with_pin() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let out = fraccover(&["factor", &c4, "--a", "1", "--b", "1", "--pin", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let edges = json(&out)["edges"].clone();
    assert!(edges.as_array().unwrap().contains(&serde_json::json!([1, 2, "1"])));
    let star = write(dir.path(), "star.txt", "3 2\n0 1\n0 2\n");
    let out = fraccover(&["factor", &star, "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn experiments_write_to_result_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "x.conf", "mode = oracle-exhaustive\nparams = 1,2\nn = 0..4\noutput = small.csv\n");
    let out = Command::new(env!("CARGO_BIN_EXE_fraccover"))
        .args(["experiment", "--config", &cfg, "--set", "params=1,1 2,2"])
        .env("RESULT_DIR", dir.path().join("results"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["rows"], 2 * (1 + 1 + 2 + 8 + 64));
    let ledger = std::fs::read_to_string(dir.path().join("results/small.csv")).unwrap();
    assert!(ledger.starts_with("ledger_version,instance,source,graph6,graph_sha256,"));

    let out = fraccover(&["crosscheck", "--n-max", "3", "--output", &dir.path().join("cc.csv").display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    let out = fraccover(&["experiment", "--config", &cfg, "--set", "colour=red"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_corpus_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/connected7.g6");
    let out = fraccover(&[
        "crosscheck",
        "--corpus",
        &corpus.display().to_string(),
        "--params",
        "1,1 2,3,1",
        "--output",
        &dir.path().join("c.csv").display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["rows"].as_u64(), v["agreements"].as_u64()), (Some(2 * 853), Some(2 * 853)));
}
