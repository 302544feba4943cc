//! End-to-end runs of the `walg` binary.

mod common;

use std::process::{Command, Output};

use common::data;
use serde_json::{json, Value};

fn walg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn d(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn ymatrix_limit() {
    let o = walg(&["ymatrix", "--a", "2", "--b", "2", "--c", "2", "--n", "1", "--eps-limit"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["entries"], json!([["-1/2", "-1/2"], ["3/2", "-1/2"]]));
    assert_eq!(v["rows"], json!([[1, 0], [0, 1]]));
}

#[test]
fn ymatrix_methods_agree() {
    let run = |m: &str| walg(&["ymatrix", "--a", "3", "--b", "1", "--c", "2", "--n", "2", "--method", m]).stdout;
    let closed = run("closed");
    assert_eq!(closed, run("recursive"));
    assert_eq!(closed, run("oracle"));
}

#[test]
fn lambda_and_tbasis() {
    let v = json_of(&walg(&["lambda", "--a", "2", "--b", "3", "--c", "2"]));
    assert_eq!(v, json!({"(0,2)": "1", "(1,1)": "-3", "(2,0)": "6"}));
    let v = json_of(&walg(&["tbasis", "--dims", "2,2,2", "--e", "2"]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
    assert_eq!(v["basis"][0], json!({"m": [0, 2], "intermediateDims": [1]}));
}

#[test]
fn zmatrix_blocks() {
    let v = json_of(&walg(&["zmatrix", "--dims", "2,2,2", "--perm", "2,3,1", "--eps", "limit"]));
    let blocks = v["blocks"].as_array().unwrap();
    let es: Vec<i64> = blocks.iter().map(|b| b["e"].as_i64().unwrap()).collect();
    assert_eq!(es, vec![1, 2, 3, 4]);
    // a 3-cycle on the 1-dimensional top block is the identity
    assert_eq!(blocks[3]["entries"], json!([["1"]]));
}

#[test]
fn constraints_check_exit_codes() {
    let o = walg(&["constraints", "check", "--space", &d("su2_space.json"), "--f", &d("su2_f.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["violations"], json!([]));

    let o = walg(&["constraints", "check", "--space", &d("su2_space.json"), "--f", &d("nonlie_f.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!json_of(&o)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn constraints_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("walg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("constraints.json");
    let p = path.to_string_lossy().into_owned();
    let o = walg(&["constraints", "generate", "--space", &d("su2_space.json"), "--max-total-grade", "3", "--out", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let from_file = walg(&[
        "constraints", "check", "--space", &d("su2_space.json"), "--f", &d("nonlie_f.json"), "--constraints", &p,
    ]);
    let generated = walg(&["constraints", "check", "--space", &d("su2_space.json"), "--f", &d("nonlie_f.json")]);
    assert_eq!(from_file.stdout, generated.stdout);
    assert_eq!(from_file.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_byte_stable() {
    let args = ["constraints", "generate", "--space", &d("mixed_space.json"), "--max-total-grade", "4"];
    let a = walg(&args);
    let b = walg(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn invariance_and_gram() {
    let inv = |g: &str| walg(&["invariance", "check", "--space", &d("su2_space.json"), "--f", &d("su2_f.json"), "--gram", &d(g)]);
    assert_eq!(inv("gram_identity.json").status.code(), Some(0));
    assert_eq!(inv("gram_112.json").status.code(), Some(1));
    assert_eq!(walg(&["gram", "check", "--gram", &d("gram_112.json")]).status.code(), Some(0));
    let o = walg(&["gram", "check", "--gram", &d("gram_indefinite.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_of(&o)["witness"]["vector"], json!(["-2", "1"]));
}

#[test]
fn input_errors_exit_2() {
    let o = walg(&["constraints", "generate", "--space", &d("identity_space.json"), "--max-total-grade", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unitarity bound"));

    let o = walg(&["constraints", "check", "--space", &d("virasoro_space.json"), "--f", &d("su2_f.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field label"));

    let o = walg(&["gram", "check", "--gram", &d("su2_f.json")]);
    assert_eq!(o.status.code(), Some(2));

    let o = walg(&["ymatrix", "--a", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = walg(&["cohomology", "dims", "--space", &d("mixed_space.json"), "--f", &d("mixed_f.json"), "--degree", "1", "--sector", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not closed"));
}

#[test]
fn cohomology_commands() {
    let o = walg(&["cohomology", "dims", "--space", &d("su2_space.json"), "--f", &d("su2_f.json"), "--degree", "2", "--sector", "grade1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!((v["dimZ"].as_u64(), v["dimB"].as_u64(), v["dimRLH"].as_u64()), (Some(6), Some(6), Some(0)));

    let o = walg(&["cohomology", "bb-test", "--space", &d("mixed_space.json"), "--f", &d("mixed_f.json"), "--degree", "1..2", "--cutoff", "2", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["pass"], json!(true));

    let o = walg(&["cohomology", "bb-test", "--space", &d("su2_space.json"), "--f", &d("nonlie_f.json"), "--degree", "1", "--cutoff", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert!(v["results"][0]["failure"]["fields"].is_array());
}

#[test]
fn deform_commands() {
    let su2 = [&d("su2_space.json"), "--f", &d("su2_f.json")];
    let o = walg(&["deform", "check-first-order", "--space", su2[0], su2[1], su2[2], "--gamma1", &d("su2_gamma0.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["isCocycle"], json!(true));

    let o = walg(&["deform", "obstruct", "--space", su2[0], su2[1], su2[2], "--order", "2", "--series", &d("su2_series.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["obstruction"]["components"], json!([]));
    assert_eq!(v["bG"]["vanishes"], json!(true));

    let o = walg(&["deform", "integrate", "--space", su2[0], su2[1], su2[2], "--order", "2", "--series", &d("su2_series.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["status"], json!("solved"));

    let o = walg(&[
        "deform", "integrate", "--space", &d("su2_space.json"), "--f", &d("abelian_f.json"), "--order", "2", "--series",
        &d("nonlie_series.json"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["status"], json!("obstructed"));
    assert_eq!((v["rankImage"].as_u64(), v["rankAugmented"].as_u64()), (Some(0), Some(1)));
}
