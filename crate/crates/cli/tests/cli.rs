use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SPINDLE432: &str =
    "# tail 0, head 1, paths of length 4, 3 and 2\n8 9\n0 2\n2 3\n3 4\n4 1\n0 5\n5 6\n6 1\n0 7\n7 1\n";

fn spindle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spindle")).args(args).env_remove("SPINDLE_GUARD").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn max_k_and_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.dg", SPINDLE432);
    let out = spindle(&["solve", "max-k", "--ell", "2", &g]);
    let doc = json(&out);
    assert_eq!(doc["answer"], 3);
    assert!(doc["stats"]["elapsed_ms"].is_u64() && doc["stats"]["explored"].is_u64());
    let w = write(dir.path(), "w.json", &String::from_utf8(out.stdout).unwrap());
    assert_eq!(json(&spindle(&["validate", "--spec", "2,2,2", &g, &w]))["answer"], true);
    let bad = json(&spindle(&["validate", "--spec", "3,3,3", &g, &w]));
    assert_eq!(bad["answer"]["valid"], false);
}

#[test]
fn solver_answers() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.dg", SPINDLE432);
    let answer = |args: &[&str]| json(&spindle(args))["answer"].clone();
    assert_eq!(answer(&["solve", "max-k", "--ell", "3", &g]), 2);
    assert_eq!(answer(&["solve", "max-k", "--ell", "4", "--oracle", &g]), 1);
    assert_eq!(answer(&["solve", "two-spindle", "--total", "7", &g]), true);
    assert_eq!(answer(&["solve", "two-spindle", "--total", "8", &g]), false);
    assert_eq!(answer(&["solve", "two-spindle", "--l1", "3", "--l2", "4", &g]), true);
    assert_eq!(answer(&["solve", "two-spindle", "--l1", "4", "--l2", "4", &g]), false);
    assert_eq!(answer(&["solve", "dag", "--k", "3", "--ell", "2", &g]), true);
    assert_eq!(answer(&["solve", "dag", "--k", "3", "--ell", "3", &g]), false);
}

#[test]
fn oracle_ignores_length_order() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.dg", SPINDLE432);
    for (a, b) in [("1,2,3", "3,2,1"), ("2,3,4", "4,3,2"), ("3,3", "3,3")] {
        let x = json(&spindle(&["oracle", "--lengths", a, &g]));
        let y = json(&spindle(&["oracle", "--lengths", b, &g]));
        assert_eq!(x["answer"], y["answer"]);
    }
    assert_eq!(json(&spindle(&["oracle", "--lengths", "2,3", "--exact", &g]))["answer"], true);
    assert_eq!(json(&spindle(&["oracle", "--lengths", "3,3", "--exact", &g]))["answer"], false);
}

#[test]
fn same_output_for_any_job_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.dg", SPINDLE432);
    let strip = |mut v: Value| {
        v["stats"] = Value::Null;
        v
    };
    let one = strip(json(&spindle(&["--jobs", "1", "solve", "max-k", "--ell", "3", &g])));
    let four = strip(json(&spindle(&["--jobs", "4", "solve", "max-k", "--ell", "3", &g])));
    assert_eq!(one, four);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.dg", SPINDLE432);
    let broken = write(dir.path(), "bad.dg", "3 2\n0 1\n");
    assert_eq!(spindle(&["solve", "max-k", "--ell", "4", &g]).status.code(), Some(2));
    assert_eq!(spindle(&["solve", "max-k", "--ell", "2", &broken]).status.code(), Some(2));
    assert_eq!(spindle(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(spindle(&["--guard", "4", "oracle", "--lengths", "1", &g]).status.code(), Some(3));
    let env_guard = Command::new(env!("CARGO_BIN_EXE_spindle"))
        .args(["oracle", "--lengths", "1", &g])
        .env("SPINDLE_GUARD", "4")
        .output()
        .unwrap();
    assert_eq!(env_guard.status.code(), Some(3));
}

#[test]
fn generators_write_digraph_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let tdm = write(dir.path(), "t.3dm", "1 1\n0 0 0\n");
    let out = dir.path().join("g.dg");
    let out_s = out.to_str().unwrap();
    let doc = json(&spindle(&["gen", "3dm", "--plant", &tdm, "--out", out_s]));
    assert_eq!(doc["answer"]["vertices"], 11);
    let side: Value = serde_json::from_str(&fs::read_to_string(format!("{out_s}.json")).unwrap()).unwrap();
    assert_eq!(side["provenance"]["reduction"], "3dm");
    let planted = write(dir.path(), "p.json", &side["planted"]["value"].to_string());
    assert_eq!(json(&spindle(&["validate", "--spec", "4,4,4", out_s, &planted]))["answer"], true);
    assert_eq!(json(&spindle(&["--guard", "16", "solve", "max-k", "--ell", "4", "--oracle", out_s]))["answer"], 3);

    let path = write(dir.path(), "p.dg", "3 2\n0 1\n1 2\n");
    let ham = dir.path().join("h.dg");
    let ham_s = ham.to_str().unwrap();
    json(&spindle(&["gen", "hampath-total", "--s", "0", "--t", "2", &path, "--out", ham_s]));
    assert_eq!(json(&spindle(&["solve", "two-spindle", "--total", "4", ham_s]))["answer"], true);
    json(&spindle(&["gen", "hampath-fixed", "--s", "0", "--t", "2", "--l1", "2", &path, "--out", ham_s]));
    assert_eq!(json(&spindle(&["solve", "two-spindle", "--l1", "2", "--l2", "2", ham_s]))["answer"], true);
    json(&spindle(&["gen", "longest-path", "--k", "2", &path, "--out", ham_s]));
    assert!(fs::read_to_string(ham_s).unwrap().starts_with("7 "));

    let tri = write(dir.path(), "k3.tri", "3 3\n0 1 2\n0 1\n1 2\n0 2\n");
    let doc = json(&spindle(&["gen", "triangles", &tri, "--out", ham_s]));
    assert_eq!(doc["answer"]["target"]["count"], 1);
    let inside = write(dir.path(), "bad.tri", "3 1\n0 0 2\n0 1\n");
    assert_eq!(spindle(&["gen", "triangles", &inside, "--out", ham_s]).status.code(), Some(2));
}
