//! End-to-end tests of the command-line driver: exit codes, output
//! formats, and determinism of seeded reports.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liecolor"))
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}.toml", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_accepts_bundled_fixtures() {
    for name in [
        "grassmann_n1",
        "grassmann_n2",
        "grassmann_n3",
        "trivial_polynomial_k3",
        "mixed_k1111",
        "twisted_pauli",
    ] {
        let out = run(&["validate", &fixture(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
        assert!(stdout(&out).contains("configuration valid"));
    }
}

#[test]
fn validate_rejects_sign_class_mismatch() {
    // A plus color placed in the fourth block.
    let dir = std::env::temp_dir().join("liecolor-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_block4.toml");
    std::fs::write(
        &path,
        r#"
k = [0, 0, 0, 1]
t_colors = [[0]]
[gamma]
invariant_factors = [2]
[epsilon]
exponent_matrix = [[1]]
denominator = 2
"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);
    let checks: Vec<String> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["check"].as_str().unwrap().to_string())
        .collect();
    assert!(checks.iter().any(|c| c == "signature.block4-minus"), "{checks:?}");
}

#[test]
fn validate_rejects_degenerate_generators() {
    let dir = std::env::temp_dir().join("liecolor-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("degenerate_g.toml");
    std::fs::write(
        &path,
        r#"
k = [2, 0, 0, 0]
[gamma]
invariant_factors = [2]
[epsilon]
exponent_matrix = [[1]]
denominator = 2
[G]
generators = [[1, 2], [2, 4]]
[hat]
images = [[0], [0]]
"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("G.nondegenerate") || stdout(&out).contains("G.independence"));
}

#[test]
fn dims_reports_closed_forms() {
    let out = run(&["dims", &fixture("grassmann_n2")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("W: 8"));
    assert!(text.contains("derived: 14"));
}

#[test]
fn dims_flags_the_boundary_case() {
    let out = run(&["dims", &fixture("grassmann_n1"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim_weyl_bar"], 2);
    let notes = v["notes"].as_array().unwrap();
    assert!(!notes.is_empty(), "boundary note expected");
}

#[test]
fn simplicity_produces_certificates() {
    let out = run(&["simplicity", &fixture("grassmann_n2"), "--target", "w"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("SIMPLE"));
    let out = run(&[
        "simplicity",
        &fixture("grassmann_n1"),
        "--target",
        "w",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "NOT-SIMPLE");
    assert_eq!(v["ideal"]["verified"], true);
}

#[test]
fn dsimple_emits_replayable_witness() {
    let out = run(&[
        "dsimple",
        &fixture("trivial_polynomial_k3"),
        "--element",
        "t[3,0]",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], true);
    let moves = v["moves"].as_array().unwrap();
    assert_eq!(moves.len(), 2);
    assert_eq!(moves[0]["op"], "apply_poly");
    assert_eq!(moves[1]["op"], "mul");
    assert_eq!(moves[1]["by"], "1/6");
}

#[test]
fn dsimple_rejects_inhomogeneous_elements() {
    let out = run(&[
        "dsimple",
        &fixture("grassmann_n2"),
        "--element",
        "1 + t[1,0]",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("descent failed"));
}

#[test]
fn bracket_evaluates_literals() {
    let out = run(&[
        "bracket",
        &fixture("grassmann_n1"),
        "d[1]",
        "t[1] d[1]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "d[1]");
    let out = run(&["bracket", &fixture("grassmann_n1"), "d[1]", "t[1]"]);
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn classify_canonical_slots() {
    let out = run(&["classify", &fixture("mixed_k1111"), "--p", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["class"], "SemiSimple");
    let out = run(&["classify", &fixture("mixed_k1111"), "--p", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["class"], "LocallyNilpotent");
}

#[test]
fn table_export_is_keyed_by_literals() {
    let dir = std::env::temp_dir().join("liecolor-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path: PathBuf = dir.join("w_table.json");
    let out = run(&[
        "table",
        &fixture("grassmann_n1"),
        "--target",
        "w",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["target"], "W");
    assert_eq!(v["dimension"], 2);
    let basis: Vec<String> = v["basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert!(basis.contains(&"d[1]".to_string()));
    assert!(!v["brackets"].as_object().unwrap().is_empty());
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = [
        "run",
        &fixture("grassmann_n2"),
        "--suite",
        "dsimple,lie",
        "--seed",
        "7",
        "--probes",
        "24",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn run_all_skips_infinite_only_suites() {
    let out = run(&[
        "run",
        &fixture("trivial_polynomial_k3"),
        "--suite",
        "all",
        "--probes",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("skipped (needs a finite session): dims, simplicity"));
    // Explicitly requesting an inapplicable suite is a configuration error.
    let out = run(&["run", &fixture("trivial_polynomial_k3"), "--suite", "dims"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_config_files_load() {
    let dir = std::env::temp_dir().join("liecolor-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grassmann.json");
    std::fs::write(
        &path,
        r#"{
            "k": [0, 0, 0, 2],
            "t_colors": [[1], [1]],
            "gamma": {"invariant_factors": [2]},
            "epsilon": {"exponent_matrix": [[1]], "denominator": 2}
        }"#,
    )
    .unwrap();
    let out = run(&["dims", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("W: 8"));
}
