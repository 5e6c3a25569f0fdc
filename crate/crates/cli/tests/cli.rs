//! End-to-end tests of the `scl` binary: output formats, exit codes,
//! file exports, batch mode, determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};
use std::str::FromStr;

use scl_core::sclcore::{ResultJson, SclJson};
use scl_core::surface::SurfaceJson;

fn scl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scl_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_scl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn commutator_line_is_exact() {
    let out = scl(&["abAB"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "scl(abAB) = 1/2 (n = 1, circuits = 1)\n");
}

#[test]
fn non_commutator_word_prints_infinity() {
    let out = scl(&["ab"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "scl(ab) = infinity\n");
}

#[test]
fn verify_and_oracle_are_skipped_for_infinite_results() {
    let out = scl(&["ab", "--verify", "--oracle", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "scl(ab) = infinity\n");
}

#[test]
fn verify_and_oracle_pass_on_the_commutator() {
    let out = scl(&["abAB", "--verify", "--oracle", "1"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "scl(abAB) = 1/2 (n = 1, circuits = 1)\nverify: ok\noracle(n <= 1) = 1/2; lp <= oracle: true\n"
    );
}

#[test]
fn json_round_trips_and_reproduces_the_value() {
    let out = scl(&["abAB", "--json"]);
    assert!(out.status.success());
    let parsed = ResultJson::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed.schema, 1);
    assert_eq!(parsed.reduced, "abAB");
    match &parsed.scl {
        SclJson::Finite { num, den } => {
            let recomputed = parsed.recomputed_scl().unwrap();
            assert_eq!(recomputed.numer().to_string(), *num);
            assert_eq!(recomputed.denom().to_string(), *den);
        }
        other => panic!("expected a finite value, got {:?}", other),
    }

    let inf = scl(&["ab", "--json"]);
    let parsed = ResultJson::from_str(stdout(&inf).trim()).unwrap();
    assert_eq!(parsed.scl, SclJson::Infinite("infinite".into()));
}

#[test]
fn input_errors_exit_one() {
    for args in [
        vec!["ab1"],
        vec!["aA"],
        vec![""],
        vec!["a"],
        vec!["abAB", "--max-circuits", "0"],
        vec!["abAB", "--oracle", "0"],
        vec!["abAB", "--definitely-not-a-flag"],
    ] {
        let out = scl(&args);
        assert_eq!(out.status.code(), Some(1), "args {:?}", args);
    }
}

#[test]
fn resource_caps_exit_two() {
    let out = scl(&["ababABaBAbAB", "--max-circuits", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("cap"));
}

#[test]
fn dot_export_writes_the_turn_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("graph.dot");
    let out = scl(&["abAB", "--dot", path.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph turn_graph {"));
    assert_eq!(dot.matches(" -> ").count(), 4);
}

#[test]
fn surface_export_matches_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.json");
    let out = scl(&["abAB", "--surface", path.to_str().unwrap()]);
    assert!(out.status.success());
    let json = std::fs::read_to_string(&path).unwrap();
    let parsed: SurfaceJson = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.schema, 1);
    assert_eq!(parsed.chi, -1);
    assert_eq!(parsed.n, 1);
    assert_eq!(parsed.boundary, vec!["abAB".to_string()]);
}

#[test]
fn batch_mode_keeps_input_order() {
    let out = scl_with_stdin(&["-"], "abAB\n\nab\naabABA\n");
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "scl(abAB) = 1/2 (n = 1, circuits = 1)\n\
         scl(ab) = infinity\n\
         scl(abAB) = 1/2 (n = 1, circuits = 1)\n"
    );
}

#[test]
fn batch_json_emits_one_object_per_line() {
    let out = scl_with_stdin(&["-", "--json"], "abAB\nab\n");
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(matches!(
        ResultJson::from_str(lines[0]).unwrap().scl,
        SclJson::Finite { .. }
    ));
    assert!(matches!(
        ResultJson::from_str(lines[1]).unwrap().scl,
        SclJson::Infinite(_)
    ));
}

#[test]
fn oracle_guard_exits_two() {
    let out = scl(&["aabbAABB", "--oracle", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("guard"));
}

#[test]
fn batch_mode_reports_the_first_failure() {
    let out = scl_with_stdin(&["-"], "abAB\nnope!\naA\n");
    assert_eq!(out.status.code(), Some(1));
    // Good words still produce output.
    assert_eq!(stdout(&out), "scl(abAB) = 1/2 (n = 1, circuits = 1)\n");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("nope!"));
    assert!(err.contains("identity"));
}

#[test]
fn batch_mode_rejects_file_exports() {
    let out = scl_with_stdin(&["-", "--dot", "/tmp/should-not-exist.dot"], "abAB\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn runs_are_byte_identical() {
    for args in [
        vec!["aabAbABB"],
        vec!["aabAbABB", "--json"],
        vec!["aabAbABB", "--verify", "--oracle", "1"],
    ] {
        let first = scl(&args);
        let second = scl(&args);
        assert_eq!(first.stdout, second.stdout, "args {:?}", args);
        assert_eq!(first.status.code(), second.status.code());
    }
}
