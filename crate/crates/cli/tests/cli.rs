use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn quasimod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasimod")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = quasimod(&all);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_semisymmetry_and_idempotence() {
    let (code, v) = json(&["check", path(&data("order3.qg"))]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["details"]["semisymmetric"], true);
    assert_eq!(v["details"]["idempotent"], true);
    let (code, v) = json(&["check", path(&data("z3.qg"))]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    assert!(v["details"]["witness"].is_array());
}

#[test]
fn stabilizer_basis_rank() {
    let (code, v) = json(&["stabilizer-basis", path(&data("order3.qg")), "--base", "e"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["rank"], 7);
    assert_eq!(v["details"]["elements"][0], "E2\tR(e)");
    let (_, v) = json(&["stabilizer-basis", path(&data("order4.qg")), "--base", "c"]);
    assert_eq!(v["details"]["rank"], 13);
}

#[test]
fn mts_search_exit_codes() {
    let (code, v) = json(&["mts-search", "6"]);
    assert_eq!(code, 1);
    assert_eq!(v["details"]["witness"]["exhausted"], true);
    let (code, v) = json(&["mts-search", "7"]);
    assert_eq!(code, 0);
    let mts: Value = serde_json::from_str(v["output"].as_str().unwrap()).unwrap();
    assert_eq!(mts["n"], 7);
    assert_eq!(mts["triples"].as_array().unwrap().len(), 14);
    let out = quasimod(&["mts-search", "9", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn triple_system_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let mts = dir.path().join("p4.json");
    let qg = dir.path().join("p4.qg");
    let out = quasimod(&["qg-to-mts", path(&data("order4.qg")), "-o", mts.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = quasimod(&["mts-to-qg", mts.to_str().unwrap(), "-o", qg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&qg).unwrap();
    assert!(text.starts_with("4\n0 2 3 1\n3 1 0 2\n1 3 2 0\n2 0 1 3\n"));
    std::fs::write(&mts, r#"{"n":3,"triples":[[0,1,2]]}"#).unwrap();
    let (code, v) = json(&["mts-to-qg", mts.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["details"]["witness"]["kind"], "uncovered_pair");
    let (code, _) = json(&["qg-to-mts", path(&data("z3.qg"))]);
    assert_eq!(code, 1);
}

#[test]
fn ideal_lists_generators() {
    let (code, v) = json(&["ideal", path(&data("order3.qg")), "--base", "e"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["count"], 9);
    assert_eq!(v["details"]["generators"][0], "(e, e)\tR(e)^-1 + R(e) R(e)");
    let (_, v) = json(&["ideal", path(&data("order3.qg")), "--variety", "MTS"]);
    assert_eq!(v["details"]["count"], 12);
    let out = quasimod(&["ideal", path(&data("order3.qg")), "--variety", "Q"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn module_check_and_extension() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = json(&["module-check", path(&data("order3.qg")), path(&data("order3-f3.json")), "--base", "e"]);
    assert_eq!(code, 0);
    let table = dir.path().join("e81.qg");
    let (code, v) =
        json(&["extend", path(&data("order3.qg")), path(&data("order3-f3.json")), "-o", table.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["order"], 81);
    assert!(v["details"]["checks"].as_object().unwrap().values().all(|c| c == true));
    let (code, v) = json(&["check", table.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["order"], 81);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"modulus":3,"dim":1,"assign":{"e":[[1]],"a":[[1]],"b":[[1]]}}"#).unwrap();
    let (code, v) = json(&["module-check", path(&data("order3.qg")), bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!v["details"]["witness"].as_array().unwrap().is_empty());
    let (code, _) = json(&["extend", path(&data("order3.qg")), bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let out = quasimod(&["extend", path(&data("order3.qg")), path(&data("order3-f3.json")), "--cap", "80"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds cap"));
}

#[test]
fn words_and_derivatives() {
    let (code, v) = json(&["normalize-word", path(&data("order3.qg")), "b*((X*(X*X))*X)"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["normal_form"], "b*(X*X)");
    let (_, v) = json(&["normalize-word", path(&data("order3.qg")), "b*((X*(X*X))*X)", "--variety", "MTS"]);
    assert_eq!(v["details"]["normal_form"], "b*X");
    let (code, v) =
        json(&["differentiate", path(&data("order3.qg")), "(y*x)*y", "--vars", "x,y", "--wrt", "y", "--at", "a,b"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["derivative"], "R(e)^-1 + R(a) R(b)");
    let out =
        quasimod(&["differentiate", path(&data("order3.qg")), "(y*x)*y", "--vars", "x,y", "--wrt", "z", "--at", "a,b"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn semisymmetrize_writes_a_semisymmetric_table() {
    let out = quasimod(&["semisymmetrize", path(&data("z3.qg"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("27\n"));
    assert!(text.contains("semisymmetric: true"));
    let out = quasimod(&["semisymmetrize", path(&data("order4.qg")), "--cap", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_and_json_agree_on_status() {
    let out = quasimod(&["check", path(&data("order4.qg"))]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: ok"));
    let out = quasimod(&["check", "/nonexistent.qg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}
