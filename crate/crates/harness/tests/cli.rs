use std::path::Path;
use std::process::{Command, Output};

use hfree::experiment::{parse_csv, VerdictLabel};
use hfree::report::Summary;

fn hfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfree")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn gen_triangles(dir: &Path) -> String {
    let out = dir.join("g.txt");
    let o = hfree(&[
        "gen",
        "--spec",
        r#"{"kind":"disjoint_copies","pattern":"k3","copies":20,"pad":5}"#,
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.join("g.cert.json").is_file());
    out.to_str().unwrap().to_string()
}

#[test]
fn generate_then_test_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_triangles(dir.path());
    let csv = dir.path().join("t.csv");
    let o = hfree(&[
        "test",
        "--input",
        &g,
        "--pattern",
        "k3",
        "--params",
        "epsilon=1/3,xi1=60,xi2=4,xi3=6",
        "--trials",
        "4",
        "--jobs",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: Summary = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary.trials, 4);
    assert!(summary.rejects > 0);
    let rows = parse_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.n == 65 && r.verdict != VerdictLabel::Abort));
    let saved: Summary =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.summary.json")).unwrap()).unwrap();
    assert_eq!(saved, summary);
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_triangles(dir.path());
    // missing xi constants
    assert_eq!(code(&hfree(&["test", "--input", &g, "--pattern", "k3", "--params", "epsilon=1/3"])), 2);
    // ceiling above the query limit
    let over = "epsilon=1/3,xi1=60,xi2=4,xi3=6,query_limit=5";
    assert_eq!(code(&hfree(&["test", "--input", &g, "--pattern", "k3", "--params", over])), 2);
    // forced past the limit: the runs abort
    let forced = "epsilon=1/3,xi1=60,xi2=4,xi3=6,query_limit=5,force=true";
    assert_eq!(code(&hfree(&["test", "--input", &g, "--pattern", "k3", "--params", forced])), 1);
    let missing = dir.path().join("nope.txt");
    assert_eq!(
        code(&hfree(&["dist", "--input", missing.to_str().unwrap(), "--pattern", "k3"])),
        2
    );
}

#[test]
fn analysis_commands_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_triangles(dir.path());
    let o = hfree(&["dist", "--input", &g, "--pattern", "k3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exact"], 20);
    let o = hfree(&["adm", "--input", &g, "--r", "3", "--method", "greedy"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = hfree(&["trim", "--input", &g, "--pattern", "k3", "--r", "3", "--alpha", "1", "--beta", "1", "--delta", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn lemma_check_passes_one_check() {
    let o = hfree(&["lemma-check", "--lemma", "seed-hit", "--trials", "300", "--jobs", "2", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "PASS");
}
