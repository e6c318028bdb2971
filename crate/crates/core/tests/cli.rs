use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn coxstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxstab")).args(args).env("COXSTAB_THREADS", "2").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_all_passes_on_sigma4() {
    let out = coxstab(&["check", "all", "--family", "A", "--n", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_of(&out);
    assert_eq!(report["schema"], 1);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "pass"));
    // the human summary goes to stderr
    assert!(String::from_utf8_lossy(&out.stderr).contains("links.link_p0"));
}

#[test]
fn infinite_group_hits_the_cap() {
    let out = coxstab(&["enumerate", "--family", "I:7", "--n", "2", "--cap", "100000"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&coxstab(&["homology", "--in", "missing.json"])), 2);
    assert_eq!(code(&coxstab(&[])), 2);
    assert_eq!(code(&coxstab(&["enumerate", "--family", "Q", "--n", "1"])), 2);
    assert_eq!(code(&coxstab(&["homology", "--in", "x.json", "--coeff", "f4"])), 2);
    assert_eq!(code(&coxstab(&["stability", "table", "--family", "A", "--nmax", "2", "--coeff", "z"])), 2);
}

#[test]
fn enumerate_reports_order() {
    let out = coxstab(&["enumerate", "--family", "B", "--n", "2", "--list"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["order"], 48);
    assert_eq!(doc["elements"].as_array().unwrap().len(), 48);
    assert_eq!(doc["elements"][0], "e");
}

#[test]
fn cosets_index() {
    let out = coxstab(&["cosets", "--family", "D", "--n", "2"]);
    assert_eq!(json_of(&out)["index"], 8);
    let out = coxstab(&["cosets", "--family", "A", "--n", "3", "--sub", "-1"]);
    assert_eq!(json_of(&out)["index"], 24);
}

#[test]
fn complex_round_trip_through_homology() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("b2.json");
    let out = coxstab(&["complex", "build", "--family", "B", "--n", "2", "--out", path(&file)]);
    assert_eq!(code(&out), 0);
    let out = coxstab(&["homology", "--in", path(&file), "--reduced"]);
    assert_eq!(code(&out), 0);
    let ranks: Vec<u64> = json_of(&out)["degrees"].as_array().unwrap().iter().map(|d| d["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![0, 0, 1]);
    let out = coxstab(&["homology", "--in", path(&file), "--coeff", "f2"]);
    assert_eq!(json_of(&out)["ring"], "f2");
}

#[test]
fn dn_build_levels() {
    let out = coxstab(&["dn", "build", "--family", "A", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["dn"]["levels"], serde_json::json!([3, 6, 6]));
}

#[test]
fn basic_trace_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = coxstab(&["check", "basic", "--family", "A", "--n", "2", "--trace", path(&trace)]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("m,element,in_size,attachment,betti\n"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn stability_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let report = dir.path().join("r.json");
    let out = coxstab(&[
        "stability", "table", "--family", "A", "--nmax", "3", "--coeff", "f2", "--out", path(&csv), "--report",
        path(&report),
    ]);
    assert_eq!(code(&out), 0);
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with("family,m,l,dim,map_rank,verdict\n"));
    assert!(body.contains("A,2,1,1,1,iso"));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["schema"], 1);
}

#[test]
fn stability_ss_json() {
    let out = coxstab(&["stability", "ss", "--family", "A", "--n", "2", "--maxdeg", "2"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["page"]["e1"].as_array().unwrap().len(), 6);
    assert!(doc["report"]["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "pass"));
}

#[test]
fn family_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.txt");
    // the H family: t - s1 labelled 5
    std::fs::write(&file, "vertices t s1\nedge t s1 5\npreferred s1\n").unwrap();
    let fam = format!("file:{}", path(&file));
    let out = coxstab(&["enumerate", "--family", &fam, "--n", "2"]);
    assert_eq!(json_of(&out)["order"], 120);
    let out = coxstab(&["check", "links", "--family", &fam, "--n", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn reports_are_deterministic() {
    let a = coxstab(&["check", "transitivity", "--family", "B", "--n", "2"]).stdout;
    let b = coxstab(&["check", "transitivity", "--family", "B", "--n", "2"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn campaigns() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "{}").unwrap();
    let out = coxstab(&["campaign", "--config", path(&empty)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["rows"], serde_json::json!([]));

    let mixed = dir.path().join("mixed.json");
    std::fs::write(
        &mixed,
        r#"{"jobs": [
            {"kind": "cosets", "family": "B", "n": 2, "expect": 6},
            {"kind": "cosets", "family": "I:7", "n": 2, "cap": 5000},
            {"kind": "check", "family": "A", "n": 2, "check": "all"},
            {"kind": "stability_table", "family": "D", "nmax": 2}
        ]}"#,
    )
    .unwrap();
    let outdir = dir.path().join("out");
    let out = coxstab(&["campaign", "--config", path(&mixed), "--out-dir", path(&outdir)]);
    assert_eq!(code(&out), 3);
    let summary = json_of(&out);
    let status: Vec<&str> = summary["rows"].as_array().unwrap().iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, vec!["pass", "budget-exceeded", "pass", "pass"]);
    assert!(outdir.join("table-D-2.csv").exists());
    assert!(outdir.join("summary.csv").exists());
}

#[test]
fn link_modes_agree() {
    let reps = coxstab(&["check", "links", "--family", "B", "--n", "2"]);
    let all = coxstab(&["check", "links", "--family", "B", "--n", "2", "--all"]);
    assert_eq!((code(&reps), code(&all)), (0, 0));
    assert_eq!(json_of(&all)["config"]["all"], true);
    let out = coxstab(&["cosets", "--family", "B", "--n", "3", "--drop-top"]);
    assert_eq!(json_of(&out)["index"], 8);
    assert_eq!(code(&coxstab(&["cosets", "--family", "B", "--n", "3", "--drop-top", "--sub", "0"])), 2);
}

#[test]
fn untested_cells_exit_with_budget_code() {
    let out = coxstab(&["stability", "table", "--family", "D", "--nmax", "3", "--budget", "1000"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("untested"));
}
