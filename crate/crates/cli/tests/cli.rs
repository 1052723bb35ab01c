use assert_cmd::Command;
use bgls_cli::config::{Cli, Command as Sub};
use clap::Parser;
use serde_json::Value;
use std::path::{Path, PathBuf};

fn bgls() -> Command {
    Command::cargo_bin("bgls").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = bgls().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout_of(&a)).unwrap()
}

fn footer(csv: &str, key: &str) -> f64 {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key} row in\n{csv}"))
        .parse()
        .unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::draft202012::new(&s).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn norm_of_constant() {
    let csv = stdout_of(&["norm", "--f", "const", "--d", "3", "--p", "2"]);
    assert!((footer(&csv, "bgls_norm") - 2.046653).abs() < 1e-6);
}

#[test]
fn norm_of_core_only_u_delta() {
    let csv = stdout_of(&["norm", "--f", "u-delta", "--Delta", "2", "--d", "2", "--p", "1", "--core-only"]);
    let row = csv.lines().nth(1).unwrap();
    let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 1.0629).abs() < 1e-4, "{v}");
}

#[test]
fn small_delta_is_a_config_error() {
    let out = bgls().args(["norm", "--Delta", "0.5", "--p", "1.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Delta > 1"));
}

#[test]
fn errors_are_json_under_json_format() {
    let validator = schema("error.schema.json");
    for (args, code) in [
        (vec!["norm", "--Delta", "0.5", "--p", "1.5"], 1),
        (vec!["norm", "--f", "const", "--p", "2", "--weight-exp", "1"], 2),
        (vec!["norm", "--no-such-flag"], 1),
        (vec!["oracle-check", "--s-count", "2", "--m-count", "2", "--tolerance", "1e-30"], 3),
    ] {
        let out = bgls().args(&args).args(["--format", "json"]).output().unwrap();
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(validator.is_valid(&err), "{err}");
        assert_eq!(err["error"]["exit_code"], code);
    }
}

#[test]
fn sharpness_csv_layout() {
    let csv = stdout_of(&["sharpness"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,eps,num_norm,den_norm,V");
    assert_eq!(lines.len(), 1 + 12 + 2);
    assert!(lines[13].starts_with("slope,"));
    assert!(lines[14].starts_with("residual,"));
    assert!(footer(&csv, "slope").abs() <= 0.15);
}

#[test]
fn numerator_slope_report() {
    let csv = stdout_of(&["sharpness", "--report", "numerator-slope"]);
    assert!((footer(&csv, "slope") + 2.5).abs() <= 0.1);
}

#[test]
fn theorem1_of_constant_is_zero() {
    let j = json_of(&["theorem1", "--f", "const", "--grid-points", "16"]);
    assert_eq!(j["result"]["estimated_c"], 0.0);
}

#[test]
fn nu_at_two() {
    let j = json_of(&["nu", "--q", "2"]);
    let v = j["result"]["rows"][0]["value"].as_f64().unwrap();
    assert!((v - 1.0).abs() <= 1e-6);
}

#[test]
fn oracle_check_default_sweep() {
    let j = json_of(&["oracle-check"]);
    assert_eq!(j["result"]["rows"].as_array().unwrap().len(), 48);
    assert!(j["result"]["max_rel_err"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn every_command_matches_the_schema() {
    let validator = schema("output.schema.json");
    for args in [
        vec!["norm", "--p", "1.2,1.5,1.8"],
        vec!["norm", "--f", "v-delta", "--p-min", "2.5", "--p-max", "10", "--count", "4", "--spacing", "geometric", "--quantity", "gradient"],
        vec!["sharpness", "--case", "unbounded-above", "--count", "4"],
        vec!["sharpness", "--case", "unbounded-infinity", "--count", "4"],
        vec!["theorem1", "--grid-points", "16"],
        vec!["nu", "--psi", "power", "--psi-b", "3", "--beta", "1", "--gamma", "0", "--count", "3", "--q-max", "2.5"],
        vec!["oracle-check", "--s-count", "3", "--m-count", "3"],
    ] {
        let j = json_of(&args);
        let errors: Vec<String> = validator.iter_errors(&j).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn config_echo_round_trips() {
    let args = [
        "bgls", "sharpness", "--case", "unbounded-above", "--alpha", "0.25", "--d", "3", "--Delta", "2.5",
        "--rel-tol", "3e-10", "--eps-min", "0.002", "--count", "5", "--format", "json",
    ];
    let parsed = Cli::try_parse_from(args).unwrap().run.command;
    let out = stdout_of(&args[1..]);
    let j: Value = serde_json::from_str(&out).unwrap();
    let echoed: Sub = serde_json::from_value(j["config"].clone()).unwrap();
    assert_eq!(echoed, parsed);
}

#[test]
fn output_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("scan.csv");
    let svg = dir.path().join("scan.svg");
    bgls()
        .args(["sharpness", "--output", table.to_str().unwrap(), "--plot", svg.to_str().unwrap()])
        .assert()
        .success()
        .stdout("");
    assert_eq!(std::fs::read_to_string(&table).unwrap(), stdout_of(&["sharpness"]));
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<polyline").count() == 3);
}

#[test]
fn golden_outputs_are_reproduced() {
    let cases: [(&str, &[&str]); 3] = [
        ("sharpness.csv", &["sharpness"]),
        ("sharpness.json", &["sharpness", "--case", "unbounded-infinity", "--format", "json"]),
        ("theorem1.json", &["theorem1", "--grid-points", "32", "--format", "json"]),
    ];
    for (file, args) in cases {
        let expected = std::fs::read_to_string(golden(file)).unwrap();
        for threads in ["1", "4"] {
            let mut a = vec!["--threads", threads];
            a.extend_from_slice(args);
            assert_eq!(stdout_of(&a), expected, "{file} with {threads} threads");
        }
    }
}
