use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn stideal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stideal"))
        .args(args)
        .env_remove("STIDEAL_SINK")
        .output()
        .unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn table_dims() {
    let out = stideal(&["table", "--p", "3", "--k", "2", "--r", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(lines(&out)[0]["dims"], serde_json::json!([1, 2, 3, 6, 6, 6, 12, 12, 9]));
    let out = stideal(&["table", "--p", "2", "--k", "2", "--r", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(lines(&out)[0]["dims"], serde_json::json!([1, 2, 4, 4]));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(code(&stideal(&["table", "--p", "2", "--k", "1", "--r", "2"])), 2);
    assert_eq!(code(&stideal(&["table", "--p", "4"])), 2);
    assert_eq!(code(&stideal(&["table", "--p", "3", "--k", "2", "--lambda", "1;2"])), 2);
    let out = stideal(&["verify", "bogus"]);
    assert_eq!(code(&out), 2);
    assert!(lines(&out)[0]["error"].as_str().unwrap().contains("unknown suite"));
    assert_eq!(code(&stideal(&["fuzz", "--family", "bogus", "--count", "1"])), 2);
}

#[test]
fn explicit_lambda_matches_auto() {
    let a = lines(&stideal(&["table", "--p", "3", "--k", "2", "--lambda", "1,0;0,1"]));
    let b = lines(&stideal(&["table", "--p", "3", "--k", "2"]));
    assert_eq!(a, b);
}

#[test]
fn table_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(code(&stideal(&["table", "--p", "3", "--k", "2", "--out", d])), 0);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"].as_array().unwrap().len(), 9);
    let t2 = dir.path().join("T_2.json");
    let out = stideal(&["inspect", t2.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = &lines(&out)[0];
    assert_eq!(v["dim"], 3);
    assert_eq!(v["free_rank"], 0);
    assert_eq!(v["verdict"]["status"], "IN_IDEAL");
    assert_eq!(v["support"]["points"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_exit_codes() {
    let out = stideal(&["verify", "fusion9", "--p", "3", "--k", "2", "--count", "6"]);
    assert_eq!(code(&out), 0);
    let ls = lines(&out);
    assert_eq!(ls.last().unwrap()["pass"], true);
    assert_eq!(code(&stideal(&["verify", "omega", "--p", "3", "--r", "2"])), 0);
    assert_eq!(
        code(&stideal(&[
            "verify",
            "support",
            "--p",
            "2",
            "--r",
            "3",
            "--max-dim",
            "1"
        ])),
        0
    );
    let out = stideal(&["verify", "carlson", "--p", "3", "--k", "2", "--count", "60"]);
    assert_eq!(code(&out), 1);
    let ls = lines(&out);
    assert!(ls
        .iter()
        .any(|l| l["check"] == "outcomes_in_allowed_list" && l["pass"] == false));
    assert!(ls
        .iter()
        .any(|l| l["check"] == "summands_in_allowed_list" && l["pass"] == true));
}

#[test]
fn fuzz_count_zero() {
    let dir = tempfile::tempdir().unwrap();
    let sink = dir.path().join("sink");
    let out = stideal(&["fuzz", "--count", "0", "--sink", sink.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let ls = lines(&out);
    assert_eq!(ls.len(), 1);
    assert_eq!(ls[0]["count"], 0);
    assert!(!sink.exists());
}

fn fuzz_bytes(jobs: &str, report: &Path) -> Vec<u8> {
    let out = stideal(&[
        "fuzz",
        "--p",
        "3",
        "--k",
        "2",
        "--count",
        "20",
        "--seed",
        "7",
        "--jobs",
        jobs,
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    std::fs::read(report).unwrap()
}

#[test]
fn fuzz_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = fuzz_bytes("1", &dir.path().join("a.json"));
    let b = fuzz_bytes("4", &dir.path().join("b.json"));
    assert_eq!(a, b);
    let out = stideal(&["fuzz", "--family", "loewy2", "--count", "40", "--p", "3", "--k", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn sink_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let sink = dir.path().join("env-sink");
    let out = Command::new(env!("CARGO_BIN_EXE_stideal"))
        .args([
            "verify",
            "fuzz",
            "--p",
            "2",
            "--k",
            "2",
            "--count",
            "5",
            "--sink",
            "/nonexistent/unused",
        ])
        .env("STIDEAL_SINK", &sink)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let ls = lines(&out);
    assert!(ls.iter().any(|l| l["check"] == "sink_empty" && l["pass"] == true));
}

#[test]
fn fusion_census() {
    let out = stideal(&["fusion", "2", "2", "--p", "3", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let v = &lines(&out)[0];
    assert_eq!(v["dim"], 9);
    assert_eq!(v["summands"], serde_json::json!({"2": 1, "4": 1}));
    assert_eq!(v["remainder_dim"], 0);
    assert_eq!(code(&stideal(&["fusion", "9", "0", "--p", "3", "--k", "2"])), 2);
}
