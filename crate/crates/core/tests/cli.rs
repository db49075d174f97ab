use std::process::{Command, Output};

use serde_json::{json, Value};
use volpoly_core::checks::{CheckReport, Severity, Witness};
use volpoly_core::harness::render;
use volpoly_core::rational::int;

fn volpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volpoly"))
        .args(args)
        .env_remove("VOLPOLY_SEED")
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn summary(out: &Output) -> Value {
    lines(out).last().unwrap()["summary"].clone()
}

fn write_vee(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("vee.json");
    std::fs::write(&path, r#"{"n": 3, "covers": [[0, 1]]}"#).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_poset_edge_cases() {
    let out = volpoly(&["gen-poset", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"n":1,"covers":[]}"#);

    let anti = lines(&volpoly(&["gen-poset", "--n", "5", "--edge-prob", "0"]));
    assert_eq!(anti[0]["covers"], json!([]));

    let total = lines(&volpoly(&["gen-poset", "--n", "6", "--edge-prob", "1", "--seed", "9"]));
    let covers = total[0]["covers"].as_array().unwrap();
    assert_eq!(covers.len(), 5);

    assert_eq!(volpoly(&["gen-poset", "--n", "0"]).status.code(), Some(3));
    assert_eq!(volpoly(&["gen-poset", "--n", "3", "--edge-prob", "1.5"]).status.code(), Some(3));

    let a = volpoly(&["gen-poset", "--n", "7", "--seed", "4"]).stdout;
    let b = volpoly(&["gen-poset", "--n", "7", "--seed", "4"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn check_poset_on_the_vee() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_vee(&dir);
    let out = volpoly(&["check-poset", &path, "--chain", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert_eq!(reports.len(), 10);
    assert_eq!(reports[0]["check"], "kahn_saks_poly");
    assert_eq!(reports[0]["instance"]["poly"], "2u + v1");
    assert!(reports[..9].iter().all(|r| r["passed"] == json!(true)));
    let s = summary(&out);
    assert_eq!(s["theorem_violations"], 0);
    assert_eq!(s["exit_code"], 0);
}

#[test]
fn check_poset_selection_and_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_volpoly"))
        .args(["check-poset", "-", "--chain", "0,1", "--checks", "af_type,rayleigh"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"n": 3, "covers": [[0, 1]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let checks: Vec<Value> = lines(&out)[..2].iter().map(|r| r["check"].clone()).collect();
    assert_eq!(checks, vec![json!("af_type"), json!("rayleigh")]);
}

#[test]
fn short_chain_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_vee(&dir);
    let out = volpoly(&["check-poset", &path, "--chain", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    let skipped = reports
        .iter()
        .filter(|r| r.get("instance").is_some_and(|i| i.get("skipped").is_some()))
        .count();
    assert_eq!(skipped, 8);
    assert_eq!(summary(&out)["skipped"], 8);
}

#[test]
fn check_poset_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = volpoly(&["check-poset", bad.to_str().unwrap(), "--chain", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());

    let path = write_vee(&dir);
    let out = volpoly(&["check-poset", &path, "--chain", "1,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chain"));

    let missing = dir.path().join("missing.json");
    let out = volpoly(&["check-poset", missing.to_str().unwrap(), "--chain", "0"]);
    assert_eq!(out.status.code(), Some(3));

    let out = volpoly(&["check-poset", &path, "--chain", "0,1", "--checks", "nope"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_identities_reports() {
    let empty = volpoly(&["verify-identities", "--trials", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(lines(&empty).len(), 1);
    assert_eq!(summary(&empty)["total"], 0);

    let a = volpoly(&["verify-identities", "--trials", "20", "--seed", "5"]);
    let b = volpoly(&["verify-identities", "--trials", "20", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(summary(&a)["theorem_violations"], 0);
    assert!(summary(&a)["total"].as_u64().unwrap() >= 20 * 10);
}

#[test]
fn seed_falls_back_to_environment() {
    let flag = volpoly(&["gen-poset", "--n", "6", "--seed", "17"]).stdout;
    let env = Command::new(env!("CARGO_BIN_EXE_volpoly"))
        .args(["gen-poset", "--n", "6"])
        .env("VOLPOLY_SEED", "17")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(flag, env);
}

#[test]
fn check_schur_cases() {
    for (lambda, m) in [("2", "2"), ("1,1", "2"), ("3,2,1", "4")] {
        let out = volpoly(&["check-schur", "--lambda", lambda, "--m", m]);
        assert_eq!(out.status.code(), Some(0), "λ={lambda}");
        let reports = lines(&out);
        assert_eq!(reports[0]["check"], "kt");
        assert_eq!(reports[1]["check"], "rkt");
        assert!(reports[..2].iter().all(|r| r["passed"] == json!(true)));
    }
    assert_eq!(volpoly(&["check-schur", "--lambda", "1,1,1", "--m", "2"]).status.code(), Some(3));
    assert_eq!(volpoly(&["check-schur", "--lambda", "1,2", "--m", "2"]).status.code(), Some(3));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.jsonl");
    let out = volpoly(&["verify-identities", "--trials", "2", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.lines().last().unwrap().contains("\"summary\""));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(volpoly(&["--help"]).status.code(), Some(0));
    assert_eq!(volpoly(&["--version"]).status.code(), Some(0));
    assert_eq!(volpoly(&[]).status.code(), Some(3));
    assert_eq!(volpoly(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(volpoly(&["fuzz", "--trials", "many"]).status.code(), Some(3));
    assert_eq!(volpoly(&["fuzz", "--max-n", "13"]).status.code(), Some(3));
}

#[test]
fn small_fuzz_run() {
    let args = ["fuzz", "--seed", "3", "--trials", "5", "--max-n", "6", "--max-chain", "3"];
    let a = volpoly(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, volpoly(&args).stdout);
    let s = summary(&a);
    assert_eq!(s["theorem_violations"], 0);
    assert_eq!(s["config"]["trials"], 5);

    let fixed = volpoly(&["fuzz", "--trials", "3", "--n", "4", "--edge-prob", "0.5"]);
    assert_eq!(fixed.status.code(), Some(0));
    for r in &lines(&fixed)[..lines(&fixed).len() - 1] {
        assert_eq!(r["instance"]["corpus"]["poset"]["n"], 4);
    }
}

#[test]
fn exit_code_contract() {
    let ok = CheckReport::pass("kt", Severity::Theorem, json!({}));
    let candidate = CheckReport::fail(
        "rayleigh",
        Severity::Conjecture,
        json!({}),
        Witness::new(json!([0]), int(2), int(1)),
    );
    let bug = CheckReport::fail("af_type", Severity::Theorem, json!({}), Witness::new(json!([1]), int(0), int(1)));
    assert_eq!(render("fuzz", None, &[ok.clone(), candidate.clone()]).1, 0);
    assert_eq!(render("fuzz", None, &[ok, candidate, bug]).1, 2);
}
