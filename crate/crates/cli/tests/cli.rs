// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qforest::{oracles, Graph};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qforest"));
    for var in ["QFOREST_MODEL", "QFOREST_SEED", "QFOREST_EPSILON", "QFOREST_CONST", "QFOREST_MODE", "QFOREST_FORMAT"] {
        c.env_remove(var);
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn status(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn tree_is_a_forest() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "tree.txt", "5 4\n1 2\n1 3\n3 4\n3 5\n");
    let o = run(&["decide", "forest", tree.to_str().unwrap()]);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("forest"));
}

#[test]
fn five_cycle_is_not_bipartite() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(dir.path(), "c5.txt", "5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n");
    let o = run(&["decide", "bipartite", c5.to_str().unwrap(), "--format", "json"]);
    assert_eq!(status(&o), 10);
    let doc = json(&o);
    assert_eq!(doc["verdict"]["kind"], "odd-cycle");
    let cycle: Vec<usize> = doc["witness"]["cycle"]["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    assert_eq!(cycle.len() % 2, 1);
    let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
    assert!(oracles::CycleWitness::new(&g, cycle).is_ok());
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.txt", "3 1\n1 x\n");
    let o = run(&["decide", "forest", junk.to_str().unwrap()]);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let missing = dir.path().join("absent.txt");
    assert_eq!(status(&run(&["decide", "forest", missing.to_str().unwrap()])), 2);

    let tree = write(dir.path(), "t.txt", "3 2\n1 2\n2 3\n");
    let t = tree.to_str().unwrap();
    assert_eq!(status(&run(&["decide", "forest", t, "--epsilon", "0.7"])), 2);
    assert_eq!(status(&run(&["decide", "forest", t, "--const", "nope=1"])), 2);
    assert_eq!(status(&run(&["decide", "forest", t, "--const", "lambda"])), 2);
    assert_eq!(status(&run(&["decide", "forest", t, "--model", "array"])), 2);
    assert_eq!(status(&run(&["decide", "sideways", t])), 2);
    assert_eq!(status(&run(&["spectrum", "--n", "2"])), 2);
}

#[test]
fn reports_are_reproducible_and_echo_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "6 6\n1 2\n2 3\n3 1\n4 5\n5 6\n1 4\n");
    let args = ["decide", "forest", g.to_str().unwrap(), "--seed", "42", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(status(&a), 10);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["counters"]["seed"], 42);
}

#[test]
fn environment_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "4 3\n1 2\n2 3\n3 4\n");
    let o = bin()
        .args(["decide", "forest", g.to_str().unwrap()])
        .env("QFOREST_FORMAT", "json")
        .env("QFOREST_SEED", "7")
        .env("QFOREST_CONST", "lambda=1.25,c_double=12")
        .output()
        .unwrap();
    assert_eq!(status(&o), 0);
    let doc = json(&o);
    assert_eq!(doc["counters"]["seed"], 7);
    assert_eq!(doc["constants"]["lambda"], 1.25);
    assert_eq!(doc["constants"]["c_double"], 12.0);
    let flag = bin()
        .args(["decide", "forest", g.to_str().unwrap(), "--seed", "8"])
        .env("QFOREST_FORMAT", "json")
        .env("QFOREST_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(json(&flag)["counters"]["seed"], 8);
}

#[test]
fn array_model_and_sampled_mode() {
    let dir = tempfile::tempdir().unwrap();
    let arr = write(
        dir.path(),
        "a.json",
        r#"{"degrees":[1,2,1,0],"neighbors":[[2],[1,3],[2],[]]}"#,
    );
    let o = run(&["decide", "forest", arr.to_str().unwrap(), "--format", "json", "--mode", "sampled"]);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["model"], "array");
    assert_eq!(status(&run(&["decide", "bipartite", arr.to_str().unwrap()])), 2);
    assert_eq!(status(&run(&["decide", "forest", arr.to_str().unwrap(), "--model", "matrix"])), 2);
}

#[test]
fn spectrum_reports() {
    let o = run(&["spectrum", "--n", "4", "--format", "json"]);
    assert_eq!(status(&o), 0);
    let doc = json(&o);
    let groups = doc["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 2);
    assert!((groups[1][0].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    assert_eq!(groups[1][1], 3);
    assert!(doc["factorization_residual"].as_f64().unwrap() < 1e-12);

    let doc = json(&run(&["spectrum", "--n", "3", "--format", "json"]));
    let groups = doc["groups"].as_array().unwrap();
    assert!((groups[1][0].as_f64().unwrap() - 0.75).abs() < 1e-9);
    assert_eq!(groups[1][1], 2);

    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("delta.txt");
    let o = run(&["spectrum", "--n", "5", "--dump", dump.to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    let text = std::fs::read_to_string(dump).unwrap();
    assert!(text.starts_with("dim 5\nbasis 1 2 3 4 5\n"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn gadgets_feed_the_decider() {
    let dir = tempfile::tempdir().unwrap();
    let even = dir.path().join("even.json");
    let o = run(&["gadget", "--p", "4", "--parity", "even", "-o", even.to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    let again = run(&["gadget", "--p", "4", "--parity", "even"]);
    assert_eq!(std::fs::read(&even).unwrap(), again.stdout);
    assert_eq!(status(&run(&["decide", "forest", even.to_str().unwrap()])), 10);

    let odd = run(&["gadget", "--bits", "1000", "--variant", "bipartite-test", "--edge-list"]);
    assert_eq!(status(&odd), 0);
    let text = String::from_utf8(odd.stdout).unwrap();
    let g = Graph::parse_edge_list(&text).unwrap();
    let path = write(dir.path(), "odd.txt", &text);
    let want = if oracles::is_bipartite(&g).is_ok() { 0 } else { 10 };
    assert_eq!(status(&run(&["decide", "bipartite", path.to_str().unwrap()])), want);

    assert_eq!(status(&run(&["gadget", "--p", "2", "--parity", "even"])), 2);
    assert_eq!(status(&run(&["gadget", "--bits", "10x"])), 2);
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.txt", "4 4\n1 2\n2 3\n3 4\n4 1\n");
    let o = run(&["export-dot", c4.to_str().unwrap(), "--graph", "h"]);
    assert_eq!(status(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let (h, labels) = Graph::parse_dot(&text).unwrap();
    assert_eq!(h.n(), 14);
    assert!(labels.iter().any(|l| l == "S") && labels.iter().any(|l| l == "T"));
    assert_eq!(h.to_dot("H", |v| labels[v].clone()), text);

    let o = run(&["export-dot", c4.to_str().unwrap(), "--graph", "h-prime"]);
    let (hp, labels) = Graph::parse_dot(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(hp.n(), 28);
    assert!(labels.iter().any(|l| l == "S/0") && labels.iter().any(|l| l == "T/1"));

    let o = run(&["export-dot", c4.to_str().unwrap()]);
    let (g, _) = Graph::parse_dot(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(g.m(), 4);
}
