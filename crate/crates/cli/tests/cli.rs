use std::process::{Command, Output};

use serde_json::{json, Value};

const P2: &str = r#"{"dim":2,"vertices":[[1,0],[0,1],[-1,-1]]}"#;
const P113: &str = r#"{"dim":2,"vertices":[[1,0],[0,1],[-1,-3]]}"#;
const WORKED: &str = r#"{"u":[-1,-1],"factor":{"dim":2,"vertices":[[0,0],[1,-1]]}}"#;
const UNDEFINED: &str = r#"{"u":[0,1],"factor":{"dim":2,"vertices":[[0,0],[1,0]]}}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fanomutate"));
    for var in ["FANOMUTATE_MAX_DEPTH", "FANOMUTATE_MAX_NODES", "FANOMUTATE_MAX_COORDINATE", "FANOMUTATE_MAX_FACTOR_DILATION"] {
        c.env_remove(var);
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().rev().find(|l| l.starts_with('{')).expect("an error document");
    serde_json::from_str(line).unwrap()
}

fn vertex_set(v: &Value) -> Vec<Value> {
    let mut vs = v["vertices"].as_array().unwrap().clone();
    vs.sort_by_key(|x| x.to_string());
    vs
}

#[test]
fn mutate_worked_example() {
    let out = run(&["mutate", P2, "--data", WORKED]);
    assert_eq!(out.status.code(), Some(0));
    let expected = json!({"dim": 2, "vertices": [[0, 1], [-1, -1], [1, -3]]});
    assert_eq!(vertex_set(&stdout_json(&out)), vertex_set(&expected));
}

#[test]
fn mutate_undefined_is_a_domain_failure() {
    let out = run(&["mutate", P2, "--data", UNDEFINED]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "mutation undefined");
    assert_eq!(err["height"], json!(-1));
    assert!(err["detail"].as_str().unwrap().contains("-1"));
}

#[test]
fn mutate_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let mid = dir.path().join("mid.json");
    let back = dir.path().join("back.json");
    let inverse = r#"{"u":[1,1],"factor":{"dim":2,"vertices":[[0,0],[1,-1]]}}"#;
    assert_eq!(run(&["mutate", P2, "--data", WORKED, "--out", mid.to_str().unwrap()]).status.code(), Some(0));
    let out = run(&["mutate", mid.to_str().unwrap(), "--data", inverse, "--out", back.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let result: Value = serde_json::from_str(&std::fs::read_to_string(back).unwrap()).unwrap();
    assert_eq!(vertex_set(&result), vertex_set(&serde_json::from_str(P2).unwrap()));
}

#[test]
fn mutate_polynomial_text() {
    let datum = r#"{"u":[-1,-1],"h":{"dim":2,"terms":[{"exp":[0,0],"coeff":"1"},{"exp":[1,-1],"coeff":"1"}]}}"#;
    let out = run(&["mutate", "x + y + x^-1*y^-1", "--data", datum]);
    assert_eq!(out.status.code(), Some(0));
    let f = stdout_json(&out);
    assert_eq!(f["terms"].as_array().unwrap().len(), 4);
    let out = run(&["mutable", "x + y + x^-1*y^-1", "--data", datum]);
    assert_eq!(stdout_json(&out), json!({"mutable": true}));
    let out = run(&["mutable", "x + 2*y + x^-1*y^-1", "--data", datum]);
    assert_eq!(stdout_json(&out), json!({"mutable": false}));
}

#[test]
fn markov_bound_30() {
    let out = run(&["markov", "--bound", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!([[1, 1, 1], [1, 1, 2], [1, 2, 5], [1, 5, 13], [2, 5, 29]]));
}

#[test]
fn geometry_commands() {
    assert_eq!(stdout_json(&run(&["check", P2]))["fano"], json!(true));
    let not_fano = run(&["check", r#"{"dim":2,"vertices":[[1,0],[0,1],[2,2]]}"#]);
    assert_eq!(not_fano.status.code(), Some(1));
    assert_eq!(stdout_json(&not_fano)["fano"], json!(false));

    let vol = stdout_json(&run(&["volume", P113]));
    assert_eq!(vol, json!({"normalized_volume": "5", "dual_normalized_volume": "25/3"}));

    let dual = stdout_json(&run(&["dual", P2]));
    assert_eq!(dual["vertices"].as_array().unwrap().len(), 3);

    let a = stdout_json(&run(&["canonical", P2]));
    let b = stdout_json(&run(&["canonical", r#"{"dim":2,"vertices":[[1,1],[1,2],[-2,-3]]}"#]));
    assert_eq!(a["key"], b["key"]);

    let report = stdout_json(&run(&["analyze", P113]));
    assert_eq!(report["class_T"], json!(false));
    assert_eq!(report["blowup_degree"], json!(2));

    let tri = stdout_json(&run(&["wps", "--weights", "1,1,4"]));
    assert_eq!(tri["vertices"].as_array().unwrap().len(), 3);
}

#[test]
fn explore_path_seed_transport() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let out = run(&["explore", P2, "--depth", "3", "--out", graph.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(g["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(g["format_version"], json!(1));

    let w125 = stdout_json(&run(&["wps", "--weights", "1,4,25"]));
    let out = run(&["path", "--from", P2, "--to", &w125.to_string()]);
    assert_eq!(out.status.code(), Some(0));
    let path = stdout_json(&out);
    assert_eq!(path["outcome"], "found");
    assert_eq!(path["steps"].as_array().unwrap().len(), 2);

    let out = run(&["path", "--from", P2, "--to", P113]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["reason"], "degree-mismatch");

    let seed = stdout_json(&run(&["seed", "x + y + x^-1*y^-1"]));
    assert_eq!(seed["elements"].as_array().unwrap().len(), 3);

    let steps = format!("[{WORKED}]");
    let chain = stdout_json(&run(&["transport", P2, "--path", &steps]));
    assert_eq!(chain.as_array().unwrap().len(), 2);
}

#[test]
fn outputs_are_deterministic() {
    let a = run(&["explore", P2, "--depth", "3"]);
    let b = run(&["explore", P2, "--depth", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let pretty = run(&["explore", P2, "--depth", "3", "--format", "pretty"]);
    assert_eq!(stdout_json(&pretty), stdout_json(&a));
}

#[test]
fn bounds_precedence() {
    let depth_of = |out: &Output| stderr_json(out)["config"]["max_depth"].clone();
    let default = run(&["explore", P2, "--depth", "1", "--verbose"]);
    assert_eq!(depth_of(&default), json!(1));
    let env = bin().args(["explore", P2, "--verbose", "--max-nodes", "3"]).env("FANOMUTATE_MAX_DEPTH", "3").output().unwrap();
    assert_eq!(depth_of(&env), json!(3));
    let flag = bin().args(["explore", P2, "--verbose", "--depth", "2"]).env("FANOMUTATE_MAX_DEPTH", "3").output().unwrap();
    assert_eq!(depth_of(&flag), json!(2));
    let none = run(&["seed", "x + y", "--verbose"]);
    let cfg = &stderr_json(&none)["config"];
    assert_eq!(cfg["max_depth"], json!(8));
    assert_eq!(cfg["max_nodes"], json!(10000));
    let bad = bin().args(["explore", P2]).env("FANOMUTATE_MAX_DEPTH", "deep").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");

    let out = run(&["check", r#"{"dim":2,"vertices":[[1,0],[0,1]"#]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "parse error");
    assert!(err["offset"].as_u64().unwrap() > 0);

    let out = run(&["check", "/nonexistent/polytope.json"]);
    assert_eq!(out.status.code(), Some(2));
}
