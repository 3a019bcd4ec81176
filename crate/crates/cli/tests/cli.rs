//! End-to-end tests of the `walkind` binary: exit codes, report shapes, and
//! the documented example outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_walkind"))
}

fn write_doc(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("walkind-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

const SPLIT_STEP_TRIVIAL: &str =
    r#"{"schema_version":1,"walk":{"model":"split_step","theta1":0.39269908169872414,"theta2":-0.7853981633974483}}"#;
const SPLIT_STEP_NONTRIVIAL: &str =
    r#"{"walk":{"model":"split_step","theta1":1.2566370614359172,"theta2":0.39269908169872414}}"#;

#[test]
fn index_split_step_reports_six_and_ind() {
    let doc = write_doc("ss0.json", SPLIT_STEP_TRIVIAL);
    let out = bin().arg("index").arg(&doc).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["admissible"], Value::Bool(true));
    assert_eq!(report["ind"], 0);
    assert_eq!(report["six_r"]["group"], "Z");
    assert_eq!(report["six_r"]["value"], 0);
    assert!(report["extras"]["sign_c0"].is_number());
}

#[test]
fn index_shift_has_winding_but_no_symmetry_index() {
    let doc = write_doc("shift.json", r#"{"model":"shift","dim":1,"steps":1}"#);
    let out = bin().arg("index").arg(&doc).output().unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["ind"], 1);
    assert!(report.get("six_r").is_none());
}

#[test]
fn gapless_walk_exits_3() {
    let doc = write_doc(
        "gapless.json",
        r#"{"walk":{"model":"split_step","theta1":0.0,"theta2":0.0}}"#,
    );
    let out = bin().arg("index").arg(&doc).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn inadmissible_walk_exits_2() {
    // A uniform two-component shift anticommutes with nothing: it breaks the
    // declared chiral symmetry.
    let doc = write_doc(
        "inadmissible.json",
        r#"{"walk":{"model":"shift","dim":2,"steps":1},"symmetry":{"type":"BDI",
            "eta":{"re":[[1,0],[0,1]],"im":[[0,0],[0,0]],"antiunitary":true},
            "tau":{"re":[[0,1],[1,0]],"im":[[0,0],[0,0]],"antiunitary":true},
            "gamma":{"re":[[0,1],[1,0]],"im":[[0,0],[0,0]],"antiunitary":false}}}"#,
    );
    let out = bin().arg("index").arg(&doc).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unparseable_input_exits_1() {
    let doc = write_doc("garbage.json", "not json at all");
    let out = bin().arg("index").arg(&doc).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("index").arg("/nonexistent/file.json").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("phase-diagram").arg("--grid").arg("4").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn regroup_preserves_the_chiral_index() {
    let doc = write_doc("ss1.json", SPLIT_STEP_NONTRIVIAL);
    let before = stdout_json(&bin().arg("index").arg(&doc).output().unwrap());
    assert_eq!(before["six_r"]["value"], 1);
    let regrouped = bin().arg("regroup").arg(&doc).output().unwrap();
    assert!(regrouped.status.success());
    let rg_doc = write_doc("ss1-regrouped.json", &String::from_utf8(regrouped.stdout).unwrap());
    let after = stdout_json(&bin().arg("index").arg(&rg_doc).output().unwrap());
    assert_eq!(after["six_r"]["value"], 1);
    // Canonical documents re-serialize byte-for-byte.
    let again = bin().arg("regroup").arg(&doc).output().unwrap();
    let roundtrip = std::fs::read(&rg_doc).unwrap();
    assert_eq!(again.stdout, roundtrip);
}

#[test]
fn boundary_reports_the_predicted_decay() {
    let doc = write_doc("ss0b.json", SPLIT_STEP_TRIVIAL);
    let out = bin()
        .args(["boundary", "--cells", "64", "--decoupler", "coin"])
        .arg(&doc)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert_eq!(summary["six_oracle"]["value"], 0);
    let modes = summary["modes"].as_array().unwrap();
    let right_plus = modes
        .iter()
        .find(|m| m["s"] == 1.0 && m["side"] == "right")
        .expect("right-localized +1 mode");
    let fitted = right_plus["fitted_lambda"].as_f64().unwrap();
    assert!((fitted - 0.61992).abs() < 1e-4, "fitted λ = {fitted}");
}

#[test]
fn small_lattice_warns_about_localization() {
    // Slow decay (the bulk sits near a phase boundary): on 8 cells the mode
    // profiles from the two ends of the cut chain overlap, so no side owns
    // the weight. The loose tolerance admits the finite-size-split levels.
    let doc = write_doc(
        "ss0c.json",
        r#"{"walk":{"model":"split_step","theta1":2.15,"theta2":-0.95}}"#,
    );
    let out = bin()
        .args(["boundary", "--cells", "8", "--tol", "0.3", "--decoupler", "polar"])
        .arg(&doc)
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary = stdout_json(&out);
    assert!(summary["warning"].is_string(), "expected a localization warning: {summary}");
}

#[test]
fn phase_diagram_sweep_is_deterministic_and_matches_oracle() {
    let run = |threads: &str| {
        let out = bin()
            .args(["phase-diagram", "--grid", "8", "--oracle", "64"])
            .env("WALKINDEX_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    let csv = run("1");
    assert_eq!(csv, run("4"), "sweep output depends on parallelism");
    let mut gapped = 0;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5);
        if cols[3] != "gapless" {
            assert_eq!(cols[3], cols[4], "oracle disagrees on {line}");
            gapped += 1;
        }
    }
    assert!(gapped >= 24, "only {gapped} gapped sweep points");
}

#[test]
fn bands_and_flatten_export_tables() {
    let doc = write_doc("ss0d.json", SPLIT_STEP_TRIVIAL);
    let out = bin().args(["bands", "--samples", "9"]).arg(&doc).output().unwrap();
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("k,phase_1,phase_2"));
    assert_eq!(csv.lines().count(), 10);

    let out = bin()
        .args(["flatten", "--samples", "9", "--csv"])
        .arg(&doc)
        .output()
        .unwrap();
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("k,re_00,im_00"));
    assert_eq!(table.lines().count(), 10);

    let out = bin().args(["flatten", "--samples", "9"]).arg(&doc).output().unwrap();
    let flat = stdout_json(&out);
    assert_eq!(flat["dim"], 2);
    assert_eq!(flat["ks"].as_array().unwrap().len(), 9);
}

#[test]
fn validate_reports_gap_and_admissibility() {
    let doc = write_doc("ss0e.json", SPLIT_STEP_TRIVIAL);
    let out = bin().arg("validate").arg(&doc).output().unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["unitary"], Value::Bool(true));
    assert_eq!(report["admissible"], Value::Bool(true));
    assert_eq!(report["type"], "BDI");
    assert!(report["gap"].as_f64().unwrap() > 0.3);
}
