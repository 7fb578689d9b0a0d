use std::path::PathBuf;
use std::process::{Command, Output};

use grbott::Report;
use serde_json::Value;
use tempfile::TempDir;

fn grbott(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grbott"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const EXAMPLE: &str = r#"{"dims":[2,1],"rows":[[1,1,1],[0,0,1]]}"#;
const TORUS: &str = r#"{"dims":[1,1],"rows":[[1,0],[0,1]]}"#;
const SCRAMBLED: &str = r#"{"dims":[1,1],"rows":[[1,0],[1,1]]}"#;

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", EXAMPLE);
    let out = grbott(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let bad = write(&dir, "bad.json", r#"{"dims":[1,1],"rows":[[1,1],[1,1]]}"#);
    let out = grbott(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("submatrix (1,1)"));

    let broken = write(&dir, "broken.json", r#"{"dims": [1,"#);
    assert_eq!(grbott(&["validate", broken.to_str().unwrap()]).status.code(), Some(2));

    let mismatch = write(&dir, "mismatch.json", r#"{"dims":[1,2],"rows":[[1,0],[0,1]]}"#);
    assert_eq!(grbott(&["validate", mismatch.to_str().unwrap()]).status.code(), Some(2));

    let not_bit = write(&dir, "bit.json", r#"{"dims":[1],"rows":[[2]]}"#);
    assert_eq!(grbott(&["validate", not_bit.to_str().unwrap()]).status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    assert_eq!(grbott(&["validate", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(grbott(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn report_json_keys_are_stable() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", EXAMPLE);
    let out = grbott(&["report", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec![
        "valid",
        "dims",
        "permutation",
        "normalized_dims",
        "normalized_rows",
        "remark_l_ordering",
        "orientable",
        "spin",
        "w1",
        "w2",
        "total_sw",
        "betti",
        "pi1",
        "h1",
        "fan",
    ];
    let mut got = keys.clone();
    got.sort_unstable();
    expected.sort_unstable();
    assert_eq!(got, expected);
    let pi1: Vec<&str> = v["pi1"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(pi1, vec!["flags", "generators", "relators"]);
    let flags: Vec<&str> = v["pi1"]["flags"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(flags, vec!["abelian", "aspherical", "nilpotent", "solvable", "torsion_free"]);
    assert_eq!(v["h1"], serde_json::json!({"free_rank": 0, "torsion": [2, 2]}));
    assert_eq!(v["orientable"], Value::Bool(true));
    assert_eq!(v["spin"], Value::Bool(true));
}

#[test]
fn report_json_round_trips() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("a", EXAMPLE), ("b", TORUS), ("c", SCRAMBLED)] {
        let path = write(&dir, name, text);
        let out = grbott(&["report", path.to_str().unwrap(), "--json", "--dot", "--homotopy", "3"]);
        let text = stdout(&out);
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&report).unwrap(), text.trim_end());
        assert!(report.digraph_dot.is_some() && report.higher_homotopy.is_some());
        assert_eq!(report.spin.is_none(), !report.orientable);
        let betti = &report.betti;
        assert!(betti.iter().eq(betti.iter().rev()));
    }
}

#[test]
fn report_torus_and_scrambled_input() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "t.json", TORUS);
    let v: Value =
        serde_json::from_str(&stdout(&grbott(&["report", path.to_str().unwrap(), "--json"]))).unwrap();
    assert_eq!(v["pi1"]["flags"]["abelian"], Value::Bool(true));
    assert_eq!(v["pi1"]["flags"]["aspherical"], Value::Bool(true));
    assert_eq!(v["betti"], serde_json::json!([1, 2, 1]));

    let path = write(&dir, "s.json", SCRAMBLED);
    let out = grbott(&["report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("orientable      no"));
    assert!(text.contains("spin            n/a"));
    assert!(text.contains("H1              Z + Z_2"));
}

#[test]
fn report_rejects_bad_homotopy_degree() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", EXAMPLE);
    let out = grbott(&["report", path.to_str().unwrap(), "--homotopy", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn census_lines_and_summary() {
    let out = grbott(&["census", "--dims", "2,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 9);
    let summary = &lines[8]["summary"];
    assert_eq!(summary["total"], 8);
    assert_eq!(summary["counting"], "raw_matrices");
    assert_eq!(summary["orientable"], 2);
    let orientable = lines[..8]
        .iter()
        .filter(|l| l["report"]["orientable"] == Value::Bool(true))
        .count();
    assert_eq!(orientable, 2);
    assert!(lines[..8].iter().all(|l| l["canonical_key"].is_string()));

    let again = grbott(&["census", "--dims", "2,1,1"]);
    assert_eq!(stdout(&again), stdout(&out));

    let deduped = grbott(&["census", "--dims", "1,1,1", "--dedupe"]);
    let lines: Vec<Value> =
        stdout(&deduped).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["counting"], "conjugation_orbits");
    let sizes: u64 = lines[..lines.len() - 1]
        .iter()
        .map(|l| l["orbit_size"].as_u64().unwrap())
        .sum();
    assert_eq!(sizes, 8);
}

#[test]
fn census_rejects_bad_dims() {
    assert_eq!(grbott(&["census", "--dims", "2,0"]).status.code(), Some(2));
    assert_eq!(grbott(&["census", "--dims", "x"]).status.code(), Some(2));
    assert_eq!(grbott(&["census"]).status.code(), Some(2));
}

#[test]
fn normalize_emits_a_matrix_file() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", SCRAMBLED);
    let out = grbott(&["normalize", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v, serde_json::json!({"dims": [1, 1], "rows": [[1, 1], [0, 1]]}));
    assert!(String::from_utf8_lossy(&out.stderr).contains("block order 2,1"));

    let again = write(&dir, "n.json", &stdout(&out));
    let out2 = grbott(&["normalize", again.to_str().unwrap()]);
    assert_eq!(stdout(&out2), stdout(&out));

    let bad = write(&dir, "bad.json", r#"{"dims":[1,1],"rows":[[1,1],[1,1]]}"#);
    assert_eq!(grbott(&["normalize", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn dot_output() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", EXAMPLE);
    let out = grbott(&["dot", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("digraph D {\n"));
    assert!(text.ends_with("}\n"));
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 6);
    assert_eq!(text.matches("style=dotted").count(), 2);
}

#[test]
fn two_large_blocks_are_never_orientable() {
    let dir = TempDir::new().unwrap();
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let text = format!(r#"{{"dims":[2,2],"rows":[[1,1,{a},{b}],[0,0,1,1]]}}"#);
        let path = write(&dir, "m.json", &text);
        let v: Value =
            serde_json::from_str(&stdout(&grbott(&["report", path.to_str().unwrap(), "--json"])))
                .unwrap();
        assert_eq!(v["orientable"], Value::Bool(false));
        assert_eq!(v["spin"], Value::Null);
        assert!(v["w1"].as_array().unwrap().contains(&serde_json::json!([0, 1])));
    }
    let out = grbott(&["census", "--dims", "2,2"]);
    let last = stdout(&out).lines().last().unwrap().to_string();
    let summary: Value = serde_json::from_str(&last).unwrap();
    assert_eq!(summary["summary"]["total"], 4);
    assert_eq!(summary["summary"]["orientable"], 0);
}
