//! End-to-end tests of the command-line interface: exit codes, report
//! contents, and determinism of the machine format.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn bordered(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bordered"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn pmc_check_valid_circle() {
    let out = bordered(&["pmc", "check", &fixture("torus.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("genus 1"));
}

#[test]
fn pmc_check_disconnected_exits_two() {
    let out = bordered(&["pmc", "check", &fixture("bad.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Disconnected"), "stderr: {err}");
}

#[test]
fn pmc_enumerate_genus_one() {
    let out = bordered(&["--format", "machine", "pmc", "enumerate", "-k", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("count=1"));
    assert!(text.contains("circle=[[1,3],[2,4]]"));
}

#[test]
fn algebra_poincare_split_genus_two() {
    let out = bordered(&["algebra", "poincare", &fixture("genus2_split.json")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 32 98 32 1");
}

#[test]
fn algebra_poincare_antipodal_genus_two() {
    let out = bordered(&[
        "--format",
        "machine",
        "algebra",
        "poincare",
        &fixture("genus2_antipodal.json"),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "poincare=1,32,70,32,1");
}

#[test]
fn algebra_basis_torus_middle_weight() {
    let out = bordered(&[
        "--format",
        "machine",
        "algebra",
        "basis",
        &fixture("torus.json"),
        "-i",
        "0",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("count=8"));
}

#[test]
fn pair_box_sphere_checkpoint() {
    let out = bordered(&[
        "pair",
        "box",
        &fixture("torus_inf.json"),
        &fixture("torus_zero.json"),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "H dim = 1");
}

#[test]
fn pair_mor_matched_framing() {
    let out = bordered(&[
        "--format",
        "machine",
        "pair",
        "mor",
        &fixture("torus_zero.json"),
        &fixture("torus_zero.json"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("homology_dim=2"));
}

#[test]
fn pair_hh_identity_bimodule() {
    let out = bordered(&[
        "--format",
        "machine",
        "pair",
        "hh",
        &fixture("identity_da.json"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("homology_dim=2"));
}

#[test]
fn module_verify_full_schema_passes() {
    let out = bordered(&["module", "verify", &fixture("solid_torus_d1.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("structure relation holds"));
}

#[test]
fn full_schema_module_matches_builtin_in_pairings() {
    let out1 = bordered(&[
        "--format",
        "machine",
        "pair",
        "mor",
        &fixture("solid_torus_d1.json"),
        &fixture("torus_two.json"),
    ]);
    let out2 = bordered(&[
        "--format",
        "machine",
        "pair",
        "mor",
        &fixture("torus_zero.json"),
        &fixture("torus_two.json"),
    ]);
    assert!(out1.status.success() && out2.status.success());
    assert_eq!(stdout(&out1), stdout(&out2));
}

#[test]
fn module_verify_failing_selfloop_exits_one() {
    let out = bordered(&["module", "verify", &fixture("bad_module_selfloop.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("structure relation fails"));
}

#[test]
fn module_solve_reports_both_solutions() {
    let out = bordered(&[
        "--format",
        "machine",
        "module",
        "solve",
        &fixture("solve_template.json"),
        &fixture("solve_support.json"),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("solutions=2"));
    assert!(text.contains("solution=\n") || text.ends_with("solution="));
    assert!(text.contains("solution=0"));
}

#[test]
fn grading_check_trivial_passes() {
    let out = bordered(&[
        "grading",
        "check",
        &fixture("piece_torus_bottom.json"),
        &fixture("grading_trivial.json"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("grading passes"));
}

#[test]
fn grading_check_random_candidates_all_fail_on_weight_two() {
    let out = bordered(&[
        "--format",
        "machine",
        "--seed",
        "7",
        "grading",
        "check",
        &fixture("piece_torus_w2.json"),
        "--random",
        "25",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("candidates_passing=0"), "got: {text}");
}

#[test]
fn diagram_gens_counts_two() {
    let out = bordered(&[
        "--format",
        "machine",
        "diagram",
        "gens",
        &fixture("diagram_solid_torus.json"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("count=2"));
}

#[test]
fn machine_output_is_deterministic() {
    let args = [
        "--format",
        "machine",
        "algebra",
        "basis",
        &fixture("torus.json"),
        "-i",
        "1",
    ];
    let first = stdout(&bordered(&args));
    let second = stdout(&bordered(&args));
    assert_eq!(first, second);
    assert!(!first.is_empty());
}

#[test]
fn schema_rejection_names_offending_field() {
    let dir = std::env::temp_dir().join("bordered-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_schema.json");
    std::fs::write(
        &path,
        r#"{"algebra": {"genus": 1, "matching": [[1,3],[2,4]]}, "side": "D",
           "generators": [{"name": "x", "idempotent": [9]}], "delta": []}"#,
    )
    .unwrap();
    let out = bordered(&["module", "verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("generators"), "stderr: {err}");
}

#[test]
fn usage_error_exits_two() {
    let out = bordered(&["pair", "box"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_guard_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_bordered"))
        .env("BFK_SIZE_GUARD", "1")
        .args(["algebra", "poincare", &fixture("genus2_split.json")])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("SizeLimit"), "stderr: {err}");
}
