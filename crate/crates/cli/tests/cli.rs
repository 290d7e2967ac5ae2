//! End-to-end tests of the `consensus-lab` binary: spawn the real
//! executable, parse its JSON, check exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_consensus-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let output = run(args);
    assert!(
        output.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn write_fixture(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("fixture.ballots");
    std::fs::write(&path, "3: a>b>c\n2: b>a>c\n2: a>c>b\n1: b>c>a\n1: c>a>b\n").unwrap();
    path
}

#[test]
fn mahonian_row_and_margin() {
    let output = run_json(&["mahonian", "--k", "4"]);
    assert_eq!(output["row"], serde_json::json!([1, 3, 5, 6, 5, 3, 1]));
    assert_eq!(output["odd_count"], 6);
    assert_eq!(output["margin"], 3);
    assert_eq!(output["collapse_range_end"], 9);
    assert_eq!(output["corollary_inequality_holds"], true);
}

#[test]
fn distance_of_reversal() {
    let output = run_json(&["distance", "a>b>c", "c>b>a"]);
    assert_eq!(output["distance"], 3);
}

#[test]
fn closer_reports_witness_pairs() {
    let output = run_json(&[
        "closer",
        "--center",
        "a>b>c",
        "--left",
        "a>b>c,b>a>c",
        "--right",
        "a>c>b,c>b>a",
    ]);
    assert_eq!(output["weak"], true);
    assert_eq!(output["strict"], true);
    assert_eq!(output["weak_witness"].as_array().unwrap().len(), 2);
}

#[test]
fn consensus_single_level_and_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let ballots = write_fixture(dir.path());
    let ballots = ballots.to_str().unwrap();

    let verdict = run_json(&[
        "consensus",
        "--profile",
        ballots,
        "--center",
        "a>b>c",
        "--r",
        "1",
    ]);
    assert_eq!(verdict["holds"], true);

    let spectrum = run_json(&["consensus", "--profile", ballots, "--center", "a>b>c"]);
    assert_eq!(spectrum["min_level"], 1);
    assert_eq!(spectrum["levels"].as_array().unwrap().len(), 3);

    let shortcut = run_json(&[
        "consensus",
        "--profile",
        ballots,
        "--center",
        "a>b>c",
        "--shortcut",
    ]);
    assert_eq!(shortcut["levels"][1]["evaluation"], "copied-from-level1");
}

#[test]
fn winners_and_majority_on_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let ballots = write_fixture(dir.path());
    let ballots = ballots.to_str().unwrap();

    let borda = run_json(&["winners", "--profile", ballots, "--rule", "borda"]);
    assert_eq!(borda["winners"], serde_json::json!(["a"]));
    assert_eq!(borda["totals"]["a"], "13");

    let custom = run_json(&[
        "winners",
        "--profile",
        ballots,
        "--rule",
        "custom",
        "--scores",
        "1,1/2,0",
    ]);
    assert_eq!(custom["winners"], serde_json::json!(["a"]));

    let majority = run_json(&["majority", "--profile", ballots]);
    assert_eq!(majority["transitive"], true);
    assert_eq!(majority["complete"], true);
    assert_eq!(majority["condorcet"]["strict_winner"], "a");
}

#[test]
fn balanced_pair_construction() {
    let output = run_json(&[
        "balanced", "--center", "a>b>c", "--r1", "b>a>c", "--r2", "a>c>b",
    ]);
    assert_eq!(output["m"], 2);
    assert_eq!(output["is_balanced"], true);
    assert_eq!(output["strict_either_direction"], false);
    assert_eq!(output["left"], serde_json::json!(["b>a>c", "b>c>a"]));
}

#[test]
fn gen_is_deterministic_and_feeds_consensus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("generated.ballots");
    let path_str = path.to_str().unwrap();
    let args = [
        "gen", "--center", "a>b>c", "--theta", "0.4", "--n", "30", "--seed", "5", "--out", path_str,
    ];
    assert!(run(&args).status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read_to_string(&path).unwrap());

    let stdout_run = run(&[
        "gen", "--center", "a>b>c", "--theta", "0.4", "--n", "30", "--seed", "5",
    ]);
    assert_eq!(String::from_utf8_lossy(&stdout_run.stdout), first);

    let verdict = run_json(&[
        "consensus",
        "--profile",
        path_str,
        "--center",
        "a>b>c",
        "--r",
        "1",
    ]);
    assert!(verdict["holds"].is_boolean());
}

#[test]
fn verify_campaigns_exit_zero_and_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("collapse.json");
    let output = run(&[
        "verify",
        "collapse",
        "--k",
        "3",
        "--n-max",
        "2",
        "--json",
        report_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let report: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["campaign"], "collapse-exhaustive");
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
    let saved: Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report, saved);

    let gap = run_json(&["verify", "gap", "--k", "3", "--n-max", "4"]);
    assert!(!gap["examples"].as_array().unwrap().is_empty());

    let sampled = run(&[
        "verify",
        "collapse",
        "--k",
        "4",
        "--n",
        "6",
        "--samples",
        "8",
        "--seed",
        "3",
    ]);
    assert!(sampled.status.success());

    let scoring = run(&[
        "verify",
        "scoring",
        "--k",
        "3",
        "--n-max",
        "3",
        "--score-samples",
        "2",
    ]);
    assert!(scoring.status.success());

    let majority = run(&["verify", "majority", "--k", "3", "--n-max", "3"]);
    assert!(majority.status.success());
}

#[test]
fn malformed_inputs_exit_with_code_two() {
    let bad_relation = run(&["distance", "a>b", "b>a"]);
    assert_eq!(bad_relation.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_relation.stderr).contains("invalid relation"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ballots");
    std::fs::write(&path, "1: a>b>c\n2: a>x>c\n").unwrap();
    let bad_ballots = run(&["majority", "--profile", path.to_str().unwrap()]);
    assert_eq!(bad_ballots.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_ballots.stderr).contains("line 2"));

    let bad_level = run(&["mahonian", "--k", "2"]);
    assert_eq!(bad_level.status.code(), Some(2));
}
