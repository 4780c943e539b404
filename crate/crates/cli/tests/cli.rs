use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parahecke")).args(args).output().expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("one JSON object per line")).collect()
}

#[test]
fn classify_prints_the_rule() {
    let out = run(&["classify", "--diagram", "D7", "--remove", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["verdict"], "noncommutative");
    assert_eq!(v["rule"], "spherical-list");
}

#[test]
fn scan_finds_a_witness() {
    let out = run(&["scan", "--diagram", "H4", "--remove", "2", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["verdict"], "noncommutative");
    assert!(v["evidence"]["c_uv"].as_str().unwrap() != v["evidence"]["c_vu"].as_str().unwrap());
}

#[test]
fn verify_table_row_with_params() {
    let out = run(&["verify-table", "--row", "D_{n,i}", "--params", "8,5"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["verdict"], "noncommutative");
    assert_eq!(lines[0]["evidence"]["w_i"], "8 6 2 3 4");
}

#[test]
fn certificates_round_trip_through_recheck() {
    let out = run(&["verify-table", "--max-n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let mut child = Command::new(env!("CARGO_BIN_EXE_parahecke"))
        .arg("recheck")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&out.stdout).unwrap();
    let checked = child.wait_with_output().unwrap();
    assert_eq!(checked.status.code(), Some(0));
    let lines = json_lines(&checked);
    assert_eq!(lines.len(), json_lines(&out).len());
    assert!(lines.iter().all(|l| l["recheck"] == true));
}

#[test]
fn tampered_certificate_fails_recheck() {
    let out = run(&["certify", "--diagram", "D5^3", "--remove", "0", "--method", "heap", "--u", "0 3 2 4 3 1 2 0", "--z", "3 5 4 3", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap().replace("holds\"]", "fails\"]");
    let dir = std::env::temp_dir().join(format!("parahecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tampered.jsonl");
    std::fs::write(&path, text).unwrap();
    let checked = run(&["recheck", path.to_str().unwrap()]);
    assert_eq!(checked.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn guard_exhaustion_exits_inconclusive() {
    let out = run(&[
        "certify", "--diagram", "D5^3", "--remove", "0", "--method", "decomposition", "--u", "0 3 2 4 3 0", "--z", "1 2 3 5 4 3",
        "--v", "0", "--guard", "1",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_lines(&out)[0]["verdict"], "inconclusive");
}

#[test]
fn lift_raises_bonds() {
    let out = run(&["lift", "--row", "A_2^{1,1,2}", "--raise", "1-2:5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["method"], "lift");
    assert_eq!(v["verdict"], "noncommutative");
}

#[test]
fn errors_exit_with_one() {
    let out = run(&["scan", "--diagram", "~A2", "--remove", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infinite"));
    let out = run(&["classify", "--diagram", "Q5", "--remove", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format_involutions() {
    let out = run(&["--format", "text", "involutions", "--diagram", "F4", "--remove", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("all involutions: true"));
}
