use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qtime_cli::{run, CliError, Command as Cmd, RunConfig};

fn qtime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtime"))
        .args(args)
        .output()
        .unwrap()
}

fn write_input(dir: &Path, text: &str) -> String {
    let path = dir.join("input.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn config(command: Cmd, input: Option<&str>, output: &Path) -> RunConfig {
    RunConfig {
        command,
        input_path: input.map(Into::into),
        output_path: output.to_path_buf(),
        grid: 200,
        tau_max: 10.0,
        epsilons: vec![],
        seed: 3,
        target: 0,
    }
}

const HARMONIC: &str = r#"{"spectrum": {"kind": "harmonic", "omega": 1.0, "n": 6}}"#;

#[test]
fn missing_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nope.json");
    let out = qtime(&[
        "tg",
        "--input",
        missing.to_str().unwrap(),
        "--output",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn malformed_json_exits_2_with_line_context() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(
        tmp.path(),
        "{\"spectrum\":\n  {\"kind\": \"harmonic\", \"n\": }\n}",
    );
    let out = qtime(&[
        "tg",
        "--input",
        &input,
        "--output",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"n\": }"));
}

#[test]
fn degenerate_spectrum_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(
        tmp.path(),
        r#"{"spectrum": {"kind": "custom", "levels": [0.0, 1.0, 1.0]}}"#,
    );
    let out = qtime(&[
        "tg",
        "--input",
        &input,
        "--output",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn state_length_mismatch_is_a_physics_error() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(
        tmp.path(),
        r#"{"spectrum": {"kind": "harmonic", "omega": 1.0, "n": 3}, "state": {"re": [0.6, 0.8]}}"#,
    );
    let err = run(&config(Cmd::Canonical, Some(&input), &tmp.path().join("o"))).unwrap_err();
    assert!(matches!(err, CliError::Physics(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn bad_options_are_input_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), HARMONIC);
    let mut cfg = config(Cmd::Zeroset, Some(&input), tmp.path());
    cfg.epsilons = vec![-1.0];
    assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    let mut cfg = config(Cmd::Tg, None, tmp.path());
    assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    cfg.input_path = Some(input.into());
    cfg.tau_max = f64::NAN;
    assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
}

#[test]
fn every_command_writes_its_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), HARMONIC);
    let expected: [(Cmd, &[&str]); 5] = [
        (
            Cmd::Tg,
            &["t_g.json", "commutator.json", "diagnostics.json"],
        ),
        (Cmd::Canonical, &["density.csv", "covariance.json"]),
        (Cmd::Cauchy, &["cauchy.csv"]),
        (Cmd::Zeroset, &["measure.csv", "paley_wiener.json"]),
        (
            Cmd::Claims,
            &["deviation.csv", "s_membership.csv", "summary.json"],
        ),
    ];
    for (i, (cmd, files)) in expected.into_iter().enumerate() {
        let dir = tmp.path().join(i.to_string());
        run(&config(cmd, Some(&input), &dir)).unwrap();
        for f in files {
            assert!(dir.join(f).is_file(), "{cmd:?} did not write {f}");
        }
    }
}

#[test]
fn csv_headers_and_row_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), HARMONIC);
    run(&config(Cmd::Canonical, Some(&input), tmp.path())).unwrap();
    let density = fs::read_to_string(tmp.path().join("density.csv")).unwrap();
    let mut lines = density.lines();
    assert_eq!(lines.next(), Some("t,p"));
    assert_eq!(lines.count(), 200);

    let mut cfg = config(Cmd::Cauchy, None, tmp.path());
    cfg.grid = 50;
    run(&cfg).unwrap();
    let cauchy = fs::read_to_string(tmp.path().join("cauchy.csv")).unwrap();
    assert!(cauchy.starts_with("N,c0,distance\n1,"));
    assert_eq!(cauchy.lines().count(), 51);
}

#[test]
fn claims_summary_reports_all_demonstrated() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), HARMONIC);
    run(&config(Cmd::Claims, Some(&input), tmp.path())).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["all_demonstrated"], true);
    assert_eq!(summary["n"], 6);
}

#[test]
fn different_seeds_give_different_claims_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), HARMONIC);
    let mut cfg = config(Cmd::Claims, Some(&input), &tmp.path().join("a"));
    run(&cfg).unwrap();
    cfg.seed = 4;
    cfg.output_path = tmp.path().join("b");
    run(&cfg).unwrap();
    let a = fs::read(tmp.path().join("a/deviation.csv")).unwrap();
    let b = fs::read(tmp.path().join("b/deviation.csv")).unwrap();
    assert_ne!(a, b);
}
