//! End-to-end checks of the binary: documented example outputs, exit
//! codes, report determinism, and the off-hypothesis warning.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use webgpa::bruhat_tits::BruhatTits;
use webgpa::graph::BuildingGraph;

fn webgpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_webgpa")).args(args).output().expect("binary runs")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn tmp_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn count_matches_the_documented_examples() {
    let out = webgpa(&["count", "--n", "3", "--k", "1", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    assert_eq!(stdout_text(&out), "13");
    let out = webgpa(&["count", "--n", "4", "--k", "2", "--q", "1"]);
    assert_eq!(stdout_text(&out), "6");
}

#[test]
fn exported_radius_one_lattice_ball_has_seven_vertices() {
    let out =
        webgpa(&["export-graph", "--model", "weight-lattice", "--n", "3", "--radius", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 7);
    assert_eq!(v["q"], 1);

    let out = webgpa(&[
        "export-graph",
        "--model",
        "weight-lattice",
        "--n",
        "3",
        "--radius",
        "1",
        "--format",
        "dot",
    ]);
    assert!(stdout_text(&out).starts_with("digraph"));
}

#[test]
fn eval_web_prints_identity_and_bigon_values_on_the_lattice() {
    let id = write_tmp("id.web", "web n=3 dom=[1] { }\n");
    let edge1 = write_tmp("b_edge1.json", r#"{"p1": [[0,0,0],[0,0,1]], "p2": [[0,0,0],[0,0,1]]}"#);
    let out = webgpa(&[
        "eval-web",
        "--model",
        "weight-lattice",
        "--n",
        "3",
        "--web",
        id.to_str().unwrap(),
        "--boundary",
        edge1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    assert_eq!(stdout_text(&out), "1");

    let bigon = write_tmp("bigon.web", "web n=3 dom=[2] { [split(1,1)] [merge(1,1)] }\n");
    let edge2 = write_tmp("b_edge2.json", r#"{"p1": [[0,0,0],[0,1,1]], "p2": [[0,0,0],[0,1,1]]}"#);
    let out = webgpa(&[
        "eval-web",
        "--model",
        "weight-lattice",
        "--n",
        "3",
        "--web",
        bigon.to_str().unwrap(),
        "--boundary",
        edge2.to_str().unwrap(),
    ]);
    assert_eq!(stdout_text(&out), "2");
}

#[test]
fn eval_web_sees_the_bigon_collapse_mod_two_on_the_building() {
    let g = BruhatTits::new(3, 3, 2).unwrap();
    let o = g.standard_vertex();
    let y = g.neighbors(&o, 2).unwrap()[0].clone();
    let boundary = serde_json::json!({ "p1": [&o, &y], "p2": [&o, &y] });
    let bfile = write_tmp("b_bt.json", &boundary.to_string());
    let bigon = write_tmp("bigon_bt.web", "web n=3 dom=[2] { [split(1,1)] [merge(1,1)] }\n");
    let base: Vec<&str> = vec![
        "eval-web",
        "--model",
        "bruhat-tits",
        "--n",
        "3",
        "--q",
        "3",
        "--web",
        bigon.to_str().unwrap(),
        "--boundary",
        bfile.to_str().unwrap(),
    ];
    let out = webgpa(&[&base[..], &["--field", "F2"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    assert_eq!(stdout_text(&out), "0");
    let out = webgpa(&[&base[..], &["--field", "Q"]].concat());
    assert_eq!(stdout_text(&out), "4");
}

#[test]
fn relation_suite_passes_on_the_weight_lattice_over_q() {
    let report = tmp_path("wl_report.json");
    let out = webgpa(&[
        "verify-relations",
        "--model",
        "weight-lattice",
        "--n",
        "3",
        "--field",
        "Q",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["total_failures"], 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 67);
}

#[test]
fn building_suite_passes_under_the_agreement_hypotheses() {
    let out = webgpa(&[
        "verify-relations",
        "--model",
        "bruhat-tits",
        "--n",
        "3",
        "--q",
        "3",
        "--field",
        "F2",
        "--out",
        tmp_path("bt_f2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    assert!(!stderr_text(&out).contains("warning"), "hypotheses are met, no warning expected");
}

#[test]
fn characteristic_zero_bigon_fails_with_exact_witnesses() {
    let report = tmp_path("bt_bigon_q.json");
    let out = webgpa(&[
        "verify-relations",
        "--model",
        "bruhat-tits",
        "--n",
        "3",
        "--q",
        "3",
        "--field",
        "Q",
        "--relations",
        "BIGON",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr_text(&out));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let reports = v["reports"].as_array().unwrap();
    let jk11 = reports
        .iter()
        .find(|r| r["params"]["j"] == 1 && r["params"]["k"] == 1)
        .expect("the j=1,k=1 bigon is in the default grid");
    let failures = jk11["failures"].as_array().unwrap();
    assert_eq!(failures.len(), jk11["pairs_tested"].as_u64().unwrap() as usize);
    for f in failures {
        assert_eq!(f["lhs"], "4");
        assert_eq!(f["rhs"], "2");
    }
}

#[test]
fn same_seed_building_runs_serialize_identically() {
    let (r1, r2) = (tmp_path("det1.json"), tmp_path("det2.json"));
    for r in [&r1, &r2] {
        let out = webgpa(&[
            "verify-relations",
            "--model",
            "bruhat-tits",
            "--n",
            "3",
            "--q",
            "3",
            "--field",
            "F2",
            "--seed",
            "5",
            "--out",
            r.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr_text(&out));
    }
    assert_eq!(fs::read(&r1).unwrap(), fs::read(&r2).unwrap());
}

#[test]
fn usage_errors_exit_two() {
    let missing_q = webgpa(&["verify-relations", "--model", "bruhat-tits", "--n", "3"]);
    assert_eq!(missing_q.status.code(), Some(2));

    let stray_q =
        webgpa(&["verify-relations", "--model", "weight-lattice", "--n", "3", "--q", "3"]);
    assert_eq!(stray_q.status.code(), Some(2));

    let bad_relation = webgpa(&[
        "verify-relations",
        "--model",
        "weight-lattice",
        "--n",
        "3",
        "--relations",
        "NOPE",
    ]);
    assert_eq!(bad_relation.status.code(), Some(2));

    let bad_flag = webgpa(&["verify-relations", "--bogus"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let id = write_tmp("id_mismatch.web", "web n=3 dom=[1] { }\n");
    let b = write_tmp("b_mismatch.json", r#"{"p1": [[0,0,0]], "p2": [[0,0,0]]}"#);
    let n_mismatch = webgpa(&[
        "eval-web",
        "--model",
        "weight-lattice",
        "--n",
        "4",
        "--web",
        id.to_str().unwrap(),
        "--boundary",
        b.to_str().unwrap(),
    ]);
    assert_eq!(n_mismatch.status.code(), Some(2));
}

#[test]
fn exhausted_precision_exits_three_with_a_radius_hint() {
    let out = webgpa(&[
        "verify-relations",
        "--model",
        "bruhat-tits",
        "--n",
        "3",
        "--q",
        "3",
        "--field",
        "F2",
        "--radius",
        "0",
        "--out",
        tmp_path("never_written.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_text(&out).contains("--radius"), "hint names the flag to raise");
}

#[test]
fn off_hypothesis_building_runs_warn_but_proceed() {
    let out = webgpa(&[
        "verify-relations",
        "--model",
        "bruhat-tits",
        "--n",
        "3",
        "--q",
        "3",
        "--field",
        "F5",
        "--relations",
        "LOLLIPOP-A",
        "--out",
        tmp_path("f5.json").to_str().unwrap(),
    ]);
    assert!(stderr_text(&out).contains("warning"));
    assert_eq!(out.status.code(), Some(0), "the lollipop holds in any characteristic");
}
