use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn catbundle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catbundle")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn generate(dir: &TempDir, preset: &str, seed: u64, noise: &str) -> PathBuf {
    let path = dir.path().join(format!("{preset}-{seed}-{noise}.json"));
    let out = catbundle(&["generate", "--preset", preset, "--seed", &seed.to_string(), "--noise", noise, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_json(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn generated_document_validates() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "s3-line5w", 7, "on");
    let out = catbundle(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["status"], "pass");
}

#[test]
fn cycle6_trivial_document_is_trivial() {
    let dir = TempDir::new().unwrap();
    let doc = read_json(&generate(&dir, "cycle6-trivial", 4, "off"));
    let top = doc["cocycle"]["top"].as_array().unwrap();
    assert!(!top.is_empty());
    assert!(top.iter().all(|e| e["value"] == "e"));
    assert!(doc["cocycle"]["inner"].as_array().unwrap().iter().all(|e| e["value"] == "e"));
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let out = catbundle(&["generate", "--preset", "s5-torus"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn generation_is_deterministic() {
    let a = catbundle(&["generate", "--preset", "s4-line5w", "--seed", "3"]);
    let b = catbundle(&["generate", "--preset", "s4-line5w", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn broken_peiffer_data_fails_validation() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "s3-line5", 1, "on");
    let mut doc = read_json(&path);
    for row in doc["actions"][0]["table"].as_object_mut().unwrap().values_mut() {
        for (h, v) in row.as_object_mut().unwrap().iter_mut() {
            *v = Value::String(h.clone());
        }
    }
    write_json(&path, &doc);
    let out = catbundle(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    assert!(report["checks"][0]["witness"].as_str().unwrap().contains("peiffer"));
    assert_eq!(code(&catbundle(&["check", path.to_str().unwrap(), "--suite", "peiffer"])), 1);
}

#[test]
fn truncated_json_reports_line_and_column() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "s3-line5", 1, "on");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 3]).unwrap();
    for args in [vec!["validate"], vec!["check", "--suite", "all"]] {
        let mut full = args.clone();
        full.insert(1, path.to_str().unwrap());
        let out = catbundle(&full);
        assert_eq!(code(&out), 2);
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("line ") && err.contains("column "), "{err}");
    }
}

#[test]
fn missing_file_and_bad_flags_are_usage_errors() {
    assert_eq!(code(&catbundle(&["validate", "/nonexistent/doc.json"])), 2);
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "s3-line5", 1, "on");
    let p = path.to_str().unwrap();
    assert_eq!(code(&catbundle(&["check", p, "--suite", "everything"])), 2);
    assert_eq!(code(&catbundle(&["check", p, "--max-path-len", "-1"])), 2);
    assert_eq!(code(&catbundle(&["check", p, "--suite", "oracle"])), 2);
    assert_eq!(code(&catbundle(&["frobnicate"])), 2);
}

#[test]
fn corrupted_tower_fails_naturality_with_walk_witness() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "s3-line5w", 7, "on");
    let mut doc = read_json(&path);
    let inner_group = doc["chain"]["inner"]["top"].as_str().unwrap().to_string();
    let elements: Vec<String> = doc["groups"]
        .as_array()
        .unwrap()
        .iter()
        .find(|g| g["name"] == inner_group)
        .unwrap()["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e.as_str().unwrap().to_string())
        .collect();
    let entry = doc["cocycle"]["inner"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["i"] != e["k"] && e["k"] != e["m"] && e["i"] != e["m"])
        .unwrap();
    let current = entry["value"].as_str().unwrap().to_string();
    entry["value"] = Value::String(elements.iter().find(|x| **x != current).unwrap().clone());
    write_json(&path, &doc);

    assert_eq!(code(&catbundle(&["validate", path.to_str().unwrap()])), 1);
    let out = catbundle(&["check", path.to_str().unwrap(), "--suite", "naturality", "--max-path-len", "3"]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    let witnesses: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail" && c["id"].as_str().unwrap().starts_with("naturality.square"))
        .map(|c| c["witness"].as_str().unwrap())
        .collect();
    assert!(!witnesses.is_empty());
    assert!(witnesses.iter().all(|w| w.contains("γ=")), "{witnesses:?}");
}

#[test]
fn oracle_suite_passes_on_dirline3() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "oracle-dirline3", 7, "on");
    let out = catbundle(&["check", path.to_str().unwrap(), "--suite", "oracle", "--max-path-len", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = stdout_json(&out);
    assert_eq!(report["summary"]["oracle_words"], 176);
}

#[test]
fn full_pipeline_passes_and_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "s3-line5w", 7, "on");
    let args = ["check", path.to_str().unwrap(), "--suite", "all", "--max-path-len", "3"];
    let first = catbundle(&args);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stdout));
    let second = catbundle(&args);
    assert_eq!(first.stdout, second.stdout);
    let report = stdout_json(&first);
    assert_eq!(report["summary"]["bundle_objects"], 10);
}

#[test]
fn diagnostic_mode_adds_rewriting_chains() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "oracle-dirline3", 2, "on");
    let out = catbundle(&["check", path.to_str().unwrap(), "--suite", "oracle", "--diagnostic"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    let agreement = report["checks"].as_array().unwrap().iter().find(|c| c["id"] == "oracle.agreement").unwrap();
    let trace = agreement["trace"].as_array().unwrap();
    assert!(trace.iter().any(|l| l.as_str().unwrap().contains("normal form")));
}
