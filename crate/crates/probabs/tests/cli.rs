use std::path::PathBuf;
use std::process::{Command, Output};

use probabs::json::read_mdp;
use serde_json::Value;

fn model(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name);
    root.to_str().unwrap().to_string()
}

fn probabs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_probabs")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn values(doc: &Value) -> Vec<(String, String)> {
    doc["result"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["state"].as_str().unwrap().into(), v["value"].as_str().unwrap().into()))
        .collect()
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn wp_prints_exact_values() {
    let o = probabs(&["wp", &model("inc.pgcl"), "[x=0|x=2]"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(values(&doc), pairs(&[("x=0", "1/2"), ("x=1", "1"), ("x=2", "0"), ("x=3", "1/2")]));
    assert_eq!(doc["result"]["values"][1]["valuation"]["x"], 1);
    assert_eq!(doc["meta"]["config"]["command"], "wp");
    assert_eq!(doc["meta"]["config"]["options"]["expectation"], "[x=0|x=2]");
    assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn wp_abstract_cubes_the_result() {
    let o = probabs(&["wp", &model("inc.pgcl"), "[x=0|x=2]", "--abstract", &model("even.preds")]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(values(&doc), pairs(&[("x=0", "0"), ("x=1", "1/2"), ("x=2", "0"), ("x=3", "1/2")]));
    assert_eq!(doc["result"]["predicates"][0], "x = 0 | x = 2");
}

#[test]
fn text_and_csv_formats() {
    let o = probabs(&["--format", "text", "wp", &model("inc.pgcl"), "[x=1]"]);
    assert_eq!(stdout(&o), "x=0: 1/2\nx=1: 0\nx=2: 1/2\nx=3: 1/2\n");
    let o = probabs(&["--format", "csv", "wp", &model("inc.pgcl"), "[x=1]"]);
    assert_eq!(stdout(&o), "state,value\nx=0,1/2\nx=1,0\nx=2,1/2\nx=3,1/2\n");
}

#[test]
fn diagnostics_exit_with_one() {
    let o = probabs(&["wp", "/nonexistent/model.pgcl", "[x=1]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pgcl");
    std::fs::write(&bad, "var x: 0..3;\nx := ").unwrap();
    let o = probabs(&["wp", bad.to_str().unwrap(), "[x=1]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.pgcl"));

    std::fs::write(&bad, "var x: 0..3;\ny := 1").unwrap();
    let o = probabs(&["wp", bad.to_str().unwrap(), "[x=1]"]);
    assert_eq!(o.status.code(), Some(1));

    let o = probabs(&["wp", &model("inc.pgcl"), "[x="]);
    assert_eq!(o.status.code(), Some(1));
    let o = probabs(&["--format", "csv", "check", "di", &model("swap.pgcl")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_ip_exit_codes() {
    let o = probabs(&["check", "ip", &model("two_flip.pgcl"), &model("eq.preds")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["verdict"], "preserving");

    let o = probabs(&["check", "ip", &model("inc.pgcl"), &model("even.preds")]);
    assert_eq!(o.status.code(), Some(3));
    let r = &json(&o)["result"];
    assert_eq!(r["verdict"], "not-preserving");
    assert_eq!(r["witness"]["predicate"], "x = 0 | x = 2");
    let d = &r["witness"]["differing"][0];
    assert_eq!((d["valuation"].as_str(), d["wp"].as_str(), d["cubed"].as_str()), (Some("x=0"), Some("1/2"), Some("0")));
}

#[test]
fn check_reports_each_demonic_component() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("either.pgcl");
    std::fs::write(&path, "var x: 0..3;\nvar y: 0..3;\nx := y [] (y := x [1/2] x := 0)").unwrap();
    let o = probabs(&["check", "ip", path.to_str().unwrap(), &model("eq.preds")]);
    let r = &json(&o)["result"];
    let comps = r["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["verdict"], "preserving");
    assert_eq!(comps[1]["verdict"], "not-preserving");
    assert_eq!(r["witness"]["component"], 1);
    assert_eq!(o.status.code(), Some(3));

    std::fs::write(&path, "var x: 0..3;\nvar y: 0..3;\nx := 0 [1/2] (x := y [] y := x)").unwrap();
    let o = probabs(&["check", "ip", path.to_str().unwrap(), &model("eq.preds")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_di_on_swap() {
    let o = probabs(&["check", "di", &model("swap.pgcl")]);
    assert_eq!(o.status.code(), Some(0));
    let o = probabs(&["check", "di", &model("inc.pgcl")]);
    assert_eq!(o.status.code(), Some(0), "one variable: only x = x and x < x");
}

#[test]
fn check_ip_on_a_loop_checks_its_body() {
    let o = probabs(&["check", "ip", &model("inc_loop.pgcl"), &model("even.preds")]);
    let r = &json(&o)["result"];
    assert_eq!(r["checked"], "loop body");
    assert_eq!(r["guard_respected"], false);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn mc_on_the_quotient() {
    let o = probabs(&["mc", &model("inc_loop.pgcl"), "Pmin=? [true U<=1 (x=1|x=3)]", "--quotient", &model("even.preds")]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["result"];
    assert_eq!(r["optimum"], "1/2");
    assert_eq!(r["states"][0]["state"], "{x=0 x=2}");
    assert_eq!(r["states"][0]["value"], "1/2");
    assert_eq!(r["quotient"], true);
}

#[test]
fn mc_reward_and_horizon_zero() {
    let o = probabs(&["mc", &model("demonic_walk.pgcl"), "Rmax=? [F (x=4)]"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["result"];
    assert_eq!(r["optimum"], "inf");
    assert_eq!(r["states"][4]["value"], "0");

    let o = probabs(&["mc", &model("demonic_walk.pgcl"), "Pmin=? [true U<=0 (x=4 | x=1)]"]);
    let got: Vec<String> =
        json(&o)["result"]["states"].as_array().unwrap().iter().map(|s| s["value"].as_str().unwrap().into()).collect();
    assert_eq!(got, ["0", "1", "0", "0", "1"]);

    let o = probabs(&["mc", &model("geometric.pgcl"), "Rmin=? [F (true)]"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn mc_curve_csv() {
    let o = probabs(&["mc", &model("demonic_walk.pgcl"), "Pmax=? [true U<=0 (x=4)]", "--curve", "3", "--init", "x=2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "T,pmin,pmax\n0,0,0\n1,0,0\n2,0,0.25\n3,0,0.25\n");
}

#[test]
fn mc_rejects_non_loop_models() {
    let o = probabs(&["mc", &model("inc.pgcl"), "Pmin=? [true U<=1 (x=1)]"]);
    assert_eq!(o.status.code(), Some(1));
    let o = probabs(&["mc", &model("inc_loop.pgcl"), "Rmin=? [F (x=1)]", "--curve", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let prefix = dir.path().join("m");
    let o = probabs(&[
        "export-mdp",
        &model("inc_loop.pgcl"),
        "-o",
        out.to_str().unwrap(),
        "--prism",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let m = read_mdp(&doc["result"]).unwrap();
    assert_eq!(m.len(), 4);
    assert_eq!(m.name(3), Some("x=3"));
    let tra = std::fs::read_to_string(dir.path().join("m.tra")).unwrap();
    assert_eq!(tra.lines().next(), Some("4 4 7"));
    let lab = std::fs::read_to_string(dir.path().join("m.lab")).unwrap();
    assert!(lab.starts_with("0=\"init\""));

    let o = probabs(&["export-mdp", &model("inc_loop.pgcl"), "--quotient", &model("even.preds")]);
    let m = read_mdp(&json(&o)["result"]).unwrap();
    assert_eq!(m.len(), 2);
}

#[test]
fn identical_inputs_give_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("a.jsonl");
    let t2 = dir.path().join("b.jsonl");
    let run = |p: &PathBuf| {
        probabs(&["--seed", "7", "rabin", "simulate", "--n", "3", "--traces", "50", "--trace-out", p.to_str().unwrap()])
    };
    let (a, b) = (run(&t1), run(&t2));
    assert_eq!(a.status.code(), Some(0));
    let strip = |s: String, p: &PathBuf| s.replace(p.to_str().unwrap(), "");
    assert_eq!(strip(stdout(&a), &t1), strip(stdout(&b), &t2));
    let (l1, l2) = (std::fs::read_to_string(&t1).unwrap(), std::fs::read_to_string(&t2).unwrap());
    assert_eq!(l1, l2);
    let first: Value = serde_json::from_str(l1.lines().next().unwrap()).unwrap();
    assert_eq!((first["trace"].as_u64(), first["step"].as_u64()), (Some(0), Some(0)));
    assert_eq!(first["state"]["L"], 0);
    assert_eq!(json(&a)["result"]["traces"], 50);
}

#[test]
fn simulate_reports_invariants() {
    let o = probabs(&["rabin", "simulate", "--split", "1,0", "--traces", "3"]);
    let r = &json(&o)["result"];
    assert_eq!(r["steps"]["max"], 2);
    assert_eq!(r["steps"]["min"], 2);
    assert_eq!(r["traces_with"]["count_changed"], 0);
    assert_eq!(r["traces_with"]["gap_over_3"], 0);
}

#[test]
fn rabin_with_no_tourists_is_terminated() {
    let o = probabs(&["rabin", "abstract", "--n", "0", "--horizon", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["curve"][0]["pmin"], "1");
}

#[test]
fn rabin_queries_table() {
    let o = probabs(&["rabin", "paper-queries", "--n", "2", "--t-max", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o)["result"]["conventions"].clone();
    assert_eq!((rows[0]["convention"].as_str(), rows[0]["rmin"].as_str(), rows[0]["rmax"].as_str()), (Some("step"), Some("3"), Some("7")));
    assert_eq!((rows[1]["convention"].as_str(), rows[1]["rmin"].as_str(), rows[1]["rmax"].as_str()), (Some("sweep"), Some("2"), Some("4")));
    assert_eq!(rows[0]["curve"].as_array().unwrap().len(), 13);
    assert_eq!(rows[0]["cross_check"]["rmin_lower_bound"], "3");

    let o = probabs(&["--format", "csv", "rabin", "queries", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = probabs(&["--format", "csv", "rabin", "queries", "--n", "2", "--convention", "step", "--t-max", "5"]);
    assert_eq!(stdout(&o), "T,pmin,pmax\n0,0,0\n1,0,0\n2,0,0\n3,0,1\n4,0,1\n5,0.5,1\n");
}

#[test]
fn truncated_curve_matches_abstract() {
    let a = probabs(&["--format", "csv", "rabin", "abstract", "--n", "2", "--horizon", "8"]);
    let t = probabs(&["--format", "csv", "rabin", "truncated", "--n", "2", "--horizon", "8"]);
    assert_eq!(stdout(&a), stdout(&t));
}

#[test]
fn help_documents_every_subcommand() {
    let o = probabs(&["--help"]);
    let h = stdout(&o);
    for sub in ["wp", "check", "mc", "rabin", "export-mdp"] {
        assert!(h.contains(sub), "{sub}");
    }
    let o = probabs(&["rabin", "--help"]);
    let h = stdout(&o);
    for sub in ["simulate", "truncated", "abstract", "queries"] {
        assert!(h.contains(sub), "{sub}");
    }
}
