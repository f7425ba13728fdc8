use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfa"))
        .args(args)
        .env_remove("TFA_SEED")
        .output()
        .expect("run tfa")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn subgroups_of_z4() {
    let out = tfa(&["subgroups", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 7);
    assert_eq!(v["subgroups"][2]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn extremal_emits_chirp_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = tfa(&["extremal", "--n", "4", "--b", "2", "--p", "1", "--out-dir", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["support_size"], 4);
    let re: Vec<f64> = serde_json::from_value(v["g"]["re"].clone()).unwrap();
    let im: Vec<f64> = serde_json::from_value(v["g"]["im"].clone()).unwrap();
    assert_eq!(re, [1.0, 0.0, 0.0, 0.0]);
    assert_eq!(im, [0.0, 0.0, -1.0, 0.0]);

    let f = dir.path().join("f.json");
    let g = dir.path().join("g.json");
    let out = tfa(&["classify", "--f", path(&f), "--g", path(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["extremal"], true);
    assert_eq!((v["b"].as_u64(), v["p"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn classify_rejects_generic_pair() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"{"n":3,"re":[1.0,0.5,0.25],"im":[0.0,0.3,-0.2]}"#).unwrap();
    let out = tfa(&["classify", "--f", path(&f), "--g", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["extremal"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tfa(&["extremal", "--n", "4", "--b", "3"]).status.code(), Some(2));
    assert_eq!(tfa(&["extremal", "--n", "4", "--b", "2", "--p", "2"]).status.code(), Some(2));
    assert_eq!(tfa(&["tao", "--prime", "9"]).status.code(), Some(2));
    assert_eq!(tfa(&["bogus"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let out = tfa(&["extremal", "--n", "4", "--b", "2", "--out-dir", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let f = dir.path().join("f.json");
    let mismatched = tfa(&["stft", "--n", "5", "--f", path(&f), "--g", path(&f)]);
    assert_eq!(mismatched.status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(tfa(&["stft", "--n", "4", "--f", path(&bad), "--g", path(&f)]).status.code(), Some(2));
}

#[test]
fn stft_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    tfa(&["extremal", "--n", "6", "--b", "3", "--p", "2", "--mu", "1,1", "--out-dir", path(dir.path())]);
    let f = dir.path().join("f.json");
    let g = dir.path().join("g.json");
    let csv = dir.path().join("v.csv");
    let out = tfa(&["stft", "--n", "6", "--f", path(&f), "--g", path(&g), "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["support_size"], 6);
    let table = tfa_core::StftTable::from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(table.n(), 6);
}

#[test]
fn verify_seed_42() {
    let out = tfa(&["verify", "--n", "12", "--trials", "500", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["trials"], 500);
}

#[test]
fn scan_and_abelian_pass() {
    let out = tfa(&["scan", "--n", "2", "--alphabet", "0,1,-1,i,-i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["failures"], 0);
    let out = tfa(&["scan", "--n", "3", "--restricted"]);
    assert_eq!(out.status.code(), Some(0));
    let out = tfa(&["abelian-verify", "--group", "2x2", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(tfa(&["scan", "--n", "2", "--alphabet", "0,2"]).status.code(), Some(2));
}
