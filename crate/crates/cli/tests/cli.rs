use std::process::{Command, Output};

use serde_json::Value;

fn gtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = gtc(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(value["schema"], "gtc-report/1");
    (value, out.status.code().unwrap())
}

#[test]
fn gsd_of_model_one_on_four_by_four() {
    let (v, code) = json(&["gsd", "--model", "m1", "--lattice", "torus:4x4"]);
    assert_eq!(code, 0);
    assert_eq!(v["gsd"], 131072);
    assert_eq!(v["k"], 17);
    assert_eq!(v["terms"]["vertex"], 16);
    assert_eq!(v["terms"]["face"], 16);
}

#[test]
fn gsd_of_clock_model() {
    let (v, _) = json(&["gsd", "--model", "zn:3", "--lattice", "torus:2x2"]);
    assert_eq!(v["gsd"], 243);
    let (w, _) = json(&["gsd", "--model", "zn", "--n", "3", "--lattice", "torus:2x2"]);
    assert_eq!(w["gsd"], 243);
}

#[test]
fn both_methods_agree() {
    let (v, code) = json(&[
        "gsd",
        "--model",
        "m1",
        "--lattice",
        "torus:2x2",
        "--method",
        "both",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["gsd"], 32);
    assert_eq!(v["dense_gsd"], 32);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn dense_budget_is_enforced() {
    let out = gtc(&[
        "gsd",
        "--model",
        "m1",
        "--lattice",
        "torus:3x3",
        "--method",
        "dense",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn single_z_excites_one_vertex() {
    let (v, code) = json(&[
        "excite",
        "--model",
        "m1",
        "--lattice",
        "torus:3x3",
        "--op",
        "Z@(1,1).E",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["energy"], 1);
    assert_eq!(v["violated"][0], "vertex (1,1)");
    assert_eq!(v["classification"], "detectable");
}

#[test]
fn closed_column_is_logical() {
    let (v, _) = json(&[
        "excite",
        "--model",
        "m1",
        "--lattice",
        "torus:3x3",
        "--op",
        "X@(0,0).W X@(0,1).W X@(0,2).W",
    ]);
    assert_eq!(v["energy"], 0);
    assert_eq!(v["classification"], "logical");
}

#[test]
fn corner_pair_is_reported_by_syndrome() {
    let (v, _) = json(&[
        "excite",
        "--model",
        "m1",
        "--lattice",
        "torus:3x3",
        "--op",
        "X@(1,1).N X@(1,1).E",
    ]);
    assert_eq!(v["energy"], 2);
    assert_eq!(v["classification"], "detectable");
}

#[test]
fn dense_excitation_matches_syndrome() {
    let seed = "*=1; (0,0).N=2; (1,0).N=2; (0,1).N=2; (1,1).N=2";
    let (v, code) = json(&[
        "excite",
        "--model",
        "m1",
        "--lattice",
        "torus:2x2",
        "--op",
        "X@(0,0).N",
        "--method",
        "both",
        "--seed-config",
        seed,
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["energy"], v["dense_energy"]);
}

#[test]
fn parse_errors_carry_columns() {
    let out = gtc(&[
        "excite",
        "--model",
        "m1",
        "--lattice",
        "torus:3x3",
        "--op",
        "Z@(1,1).E Q@(0,0).N",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
}

#[test]
fn validate_model_passes() {
    let (v, code) = json(&["validate", "--model", "m1", "--lattice", "torus:2x2"]);
    assert_eq!(code, 0, "{v}");
    assert!(v["checks"].as_array().unwrap().len() >= 6);
}

#[test]
fn validate_groupoid_commutation() {
    for g in ["sis:2", "sis:3", "isotropy-z2"] {
        let (v, code) = json(&["validate", "--groupoid", g, "--appendix-b"]);
        assert_eq!(code, 0, "{g}: {v}");
        let sw = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == "corner SW commutation")
            .unwrap();
        assert!(sw["detail"].as_str().unwrap().contains("do not"));
    }
}

#[test]
fn validate_rejects_wrong_topology() {
    let out = gtc(&["validate", "--model", "boundary", "--lattice", "torus:2x2"]);
    assert_eq!(out.status.code(), Some(2));
    let ok = gtc(&["validate", "--model", "boundary", "--lattice", "open:2x2"]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );
}

#[test]
fn validate_reads_groupoid_files() {
    let dir = std::env::temp_dir().join(format!("gtc-groupoid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z2.json");
    std::fs::write(
        &path,
        groupoid_toric::Groupoid::isotropy_z2()
            .to_json()
            .to_string(),
    )
    .unwrap();
    let arg = format!("file:{}", path.display());
    let (v, code) = json(&["validate", "--groupoid", &arg]);
    assert_eq!(code, 0, "{v}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn mismatched_dimension_is_a_config_error() {
    let out = gtc(&["gsd", "--model", "m1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
