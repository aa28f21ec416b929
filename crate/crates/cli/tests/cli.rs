use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use trifree::coloring::{count_3_colorings, CountOptions};
use trifree::generators::{pentagon_tower, shared_path_pentagons};

const PENTAGON: &str = r#"{
    "vertices": ["a","b","c","d","e"],
    "rotation": {"a":["e","b"],"b":["a","c"],"c":["b","d"],"d":["c","e"],"e":["d","a"]},
    "outer_face": ["a","b","c","d","e"]
}"#;

fn trifree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trifree")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn generated(dir: &TempDir, family: &str, k: &str) -> PathBuf {
    let path = dir.path().join(format!("{family}-{k}.json"));
    let out = trifree(&["generate", "--family", family, "--k", k, "--out", s(&path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn counts_the_pentagon() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "pentagon.json", PENTAGON);
    let out = trifree(&["count", s(&file), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["count"], 30);
    assert_eq!(r["graph"], "pentagon");
    assert!(r["budget_used"].as_u64().unwrap() > 0);
}

#[test]
fn generated_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let file = generated(&dir, "tower", "3");
    let loaded = trifree::PlaneGraph::from_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(loaded, pentagon_tower(3));
    let out = trifree(&["count", s(&file), "--json"]);
    let expected = count_3_colorings(&pentagon_tower(3), CountOptions::default()).unwrap().count;
    assert_eq!(json(&out)["count"].as_u64().map(u128::from), Some(expected));
}

#[test]
fn generate_without_out_prints_the_graph() {
    let out = trifree(&["generate", "--family", "shared"]);
    assert!(out.status.success());
    let g = trifree::PlaneGraph::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(g, shared_path_pentagons());
}

#[test]
fn perturbed_reports_echo_the_seed() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p.json");
    let args =
        ["generate", "--family", "perturbed", "--k", "3", "--seed", "11", "--ops", "3", "--out", s(&path), "--json"];
    let first = json(&trifree(&args));
    let text = std::fs::read_to_string(&path).unwrap();
    let second = json(&trifree(&args));
    assert_eq!(first, second);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    assert_eq!(first["seed"], 11);
    assert_eq!(first["subdivisions"].as_array().unwrap().len(), 3);
}

#[test]
fn matrix_lemma_passes() {
    let out = trifree(&["matrix-lemma", "--n", "12", "--seed", "7", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"], "PASS");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["violations"], 0);
    assert_eq!(r["potential_of_ones"], "40");
    assert_eq!(json(&trifree(&["matrix-lemma", "--n", "12", "--seed", "7", "--json"])), r);
}

#[test]
fn dodecahedron_passes_every_bound() {
    let dir = TempDir::new().unwrap();
    let file = generated(&dir, "dodeca", "0");
    let out = trifree(&["verify-bounds", s(&file), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r[0]["passed"], true);
    assert_eq!(r[0]["exact_count"], 7200);
    assert_eq!(r[0]["outcome"], "family");
}

#[test]
fn verify_bounds_takes_several_files() {
    let dir = TempDir::new().unwrap();
    let a = generated(&dir, "tower", "2");
    let b = generated(&dir, "garden", "2");
    let out = trifree(&["verify-bounds", s(&a), s(&b), "--k", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 2);
}

#[test]
fn analyze_follows_the_schema() {
    let dir = TempDir::new().unwrap();
    let file = generated(&dir, "dodeca", "0");
    let r = json(&trifree(&["analyze", s(&file), "--k", "3", "--json"]));
    assert_eq!(r["outcome"], "family");
    assert!(r["vertex"].is_null());
    assert_eq!(r["k"], 3);
    for key in ["family", "chain", "antichain"] {
        assert!(r[key].as_array().unwrap().iter().all(|c| c.as_array().unwrap().len() == 5), "{key}");
    }

    let path =
        r#"{"vertices":["a","b","c"],"rotation":{"a":["b"],"b":["a","c"],"c":["b"]},"outer_face":["a","b","c","b"]}"#;
    let r = json(&trifree(&["analyze", s(&write(&dir, "path.json", path)), "--json"]));
    assert_eq!(r["outcome"], "reducible");
    assert_eq!(r["vertex"], "a");
    assert_eq!(r["family"], Value::Array(vec![]));
}

#[test]
fn transition_reports_a_matrix() {
    let dir = TempDir::new().unwrap();
    let file = generated(&dir, "shared", "0");
    let out = trifree(&["transition", s(&file), "--outer", "u1,u2,u3,u4,u5", "--inner", "u1,u2,u3,u4,v", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["classification"], "dominant");
    let sum: u64 = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap())
        .map(|x| x.as_u64().unwrap())
        .sum();
    assert_eq!(r["raw_count"].as_u64(), Some(6 * sum));
    assert_eq!(r["rows"].as_array().unwrap().len(), 5);

    let chain = json(&trifree(&["transition", s(&file), "--json"]));
    assert_eq!(chain["layers"].as_array().unwrap().len(), 1);
    assert_eq!(chain["composed"]["entries"], chain["layers"][0]["entries"]);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let file = generated(&dir, "tower", "5");
    for cmd in ["count", "verify-bounds", "transition"] {
        let one = trifree(&[cmd, s(&file), "--json", "--threads", "1"]);
        let four = trifree(&[cmd, s(&file), "--json", "--threads", "4"]);
        assert_eq!(one.stdout, four.stdout, "{cmd}");
    }
}

#[test]
fn bad_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{");
    let out = trifree(&["count", s(&broken), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(json(&out)["error"], "json");

    let asym = write(&dir, "asym.json", &PENTAGON.replace(r#""b":["a","c"]"#, r#""b":["c"]"#));
    let out = trifree(&["count", s(&asym), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "asymmetric_rotation");

    assert_eq!(trifree(&["count", s(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(trifree(&["count", s(&broken), "--bogus"]).status.code(), Some(2));
    assert_eq!(trifree(&["generate", "--family", "cube"]).status.code(), Some(2));
    assert_eq!(trifree(&["generate", "--family", "tower", "--k", "0"]).status.code(), Some(2));
    assert_eq!(trifree(&["matrix-lemma", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(trifree(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_3() {
    let dir = TempDir::new().unwrap();
    let file = generated(&dir, "dodeca", "0");
    for cmd in ["count", "verify-bounds"] {
        let out = trifree(&[cmd, s(&file), "--budget", "10", "--json"]);
        assert_eq!(out.status.code(), Some(3), "{cmd}");
        assert_eq!(json(&out)["error"], "budget");
    }
}

#[test]
fn version_prints_build_info() {
    let out = trifree(&["--version"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("trifree 0.1.0"), "{text}");
}
