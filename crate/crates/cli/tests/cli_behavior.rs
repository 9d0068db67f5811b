//! End-to-end behavior of the `pgd` binary: exit codes, file formats, and
//! reproducibility of fidelity records across entry points.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use pgd_cli::atlas::{run_atlas, AtlasOptions};
use pgd_core::report::{family_from_json, fidelity_to_json};
use pgd_core::verify::{pgds_verdict, VerdictScope};

fn pgd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pgd-cli-test-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn construct_verify_round_trip_reproduces_the_atlas_record() {
    let dir = tmpdir("roundtrip");
    let fam_path = dir.join("th33.json");
    let out = pgd(&["construct", "th33", "--l", "1", "--out", fam_path.to_str().unwrap()]);
    assert!(out.status.success());

    let verify = pgd(&["verify", fam_path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(3), "ORDER-SWAPPED exits 3");
    let verify_json = String::from_utf8(verify.stdout).unwrap();

    // the same record computed in-process from the document
    let family = family_from_json(&fs::read_to_string(&fam_path).unwrap()).unwrap();
    let record = pgds_verdict(&family, VerdictScope::Both).unwrap();
    assert_eq!(verify_json, fidelity_to_json(&record));

    // and the atlas embeds the identical record for this entry
    let outcome = run_atlas(&AtlasOptions {
        pset: vec![3],
        max_v: 20,
        max_blocks: 0, // fidelity only
        max_graph_vertices: 0,
    });
    let entry = outcome
        .entries
        .iter()
        .find(|e| e.id == "th33" && e.params.get("l").map(String::as_str) == Some("1"))
        .expect("atlas covers th33 l=1");
    assert_eq!(verify_json, fidelity_to_json(&entry.fidelity));
}

#[test]
fn verify_exit_codes_span_the_verdicts() {
    let dir = tmpdir("verdicts");

    let pass = dir.join("planar.json");
    assert!(pgd(&[
        "construct", "th32", "--p", "3", "--m", "1", "--s", "2", "--out",
        pass.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(pgd(&["verify", pass.to_str().unwrap()]).status.code(), Some(0));

    let mismatch = dir.join("th42.json");
    assert!(pgd(&[
        "construct", "th42", "--group", "15", "--h-gen", "5", "--reps", "1;2", "--out",
        mismatch.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(
        pgd(&["verify", mismatch.to_str().unwrap()]).status.code(),
        Some(4)
    );

    // the 2-block matching family over the z6 base is two-valued under
    // neither semantics
    let not_pg = dir.join("cor41.json");
    assert!(pgd(&[
        "construct", "cor41", "--p", "3", "--set", "0,1,2,3", "--pattern", "theta0", "--out",
        not_pg.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(pgd(&["verify", not_pg.to_str().unwrap()]).status.code(), Some(5));

    let garbled = dir.join("garbled.json");
    fs::write(&garbled, "{ not json").unwrap();
    assert_eq!(pgd(&["verify", garbled.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn construct_rejects_bad_parameters_with_exit_2() {
    let out = pgd(&["construct", "th30", "--m", "3", "--p", "3", "--i", "0", "--j", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("m even, p an odd prime"), "constraint quoted: {msg}");
}

#[test]
fn theta_matching_accepts_explicit_pairs() {
    let out = pgd(&[
        "construct", "th40", "--m", "2", "--p", "3", "--set", "0,1,2,3", "--pairs", "0:2,1:3",
    ]);
    assert!(out.status.success());
    let doc = String::from_utf8(out.stdout).unwrap();
    assert!(doc.contains("\"pairs\": \"0:2,1:3\""), "{doc}");

    // a non-matching (index reused) is rejected with exit 2
    let bad = pgd(&[
        "construct", "th40", "--m", "2", "--p", "3", "--set", "0,1,2,3", "--pairs", "0:1,1:3",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn search_over_budget_exits_6() {
    let out = pgd(&["search", "--group", "30", "--k", "15"]);
    assert_eq!(out.status.code(), Some(6));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("155117520"), "candidate count named: {msg}");
}

#[test]
fn search_finds_the_mod4_block() {
    let out = pgd(&["search", "--group", "2x4", "--k", "4", "--fix-zero", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("{(0,0),(0,1),(1,0),(1,3)} in=10 off=6"), "{text}");
}

#[test]
fn develop_check_design_and_dsrg_files() {
    let dir = tmpdir("files");
    let fam = dir.join("fam.json");
    assert!(pgd(&["construct", "th33", "--l", "1", "--out", fam.to_str().unwrap()])
        .status
        .success());

    let grid = dir.join("dev.grid");
    assert!(pgd(&["develop", fam.to_str().unwrap(), "--out", grid.to_str().unwrap()])
        .status
        .success());
    let grid_text = fs::read_to_string(&grid).unwrap();
    assert!(grid_text.starts_with("8 8 4 4\n"));

    let check = pgd(&["check-design", grid.to_str().unwrap(), "--format", "text"]);
    assert!(check.status.success());
    let report = String::from_utf8(check.stdout).unwrap();
    assert!(report.contains("partial geometric (flag count): true"), "{report}");

    let dsrg = pgd(&["dsrg", fam.to_str().unwrap(), "--graph", "antiflag"]);
    assert!(dsrg.status.success());
    let edge_list = String::from_utf8(dsrg.stdout).unwrap();
    assert!(edge_list.starts_with("# dsrg v=32"), "{edge_list}");

    // the grid input route produces the same graph in matrix form
    let matrix = pgd(&["dsrg", grid.to_str().unwrap(), "--graph", "antiflag", "--export", "matrix"]);
    assert!(matrix.status.success());
    let grid_out = String::from_utf8(matrix.stdout).unwrap();
    assert_eq!(grid_out.lines().count(), 32);
}
