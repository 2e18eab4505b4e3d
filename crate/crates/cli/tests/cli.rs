//! End-to-end tests of the `penney` binary: output formats, exit codes,
//! determinism, and the cache file.

use std::path::PathBuf;
use std::process::{Command, Output};

fn penney(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_penney"))
        .args(args)
        .env_remove("PENNEY_CACHE")
        .output()
        .expect("binary should run")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn odds_prints_fraction_and_decimal() {
    let out = penney(&["odds", "--a", "THH", "--b", "HHH"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "7/8 (0.87500000)\n");
}

#[test]
fn decimals_flag_controls_rendering() {
    let out = penney(&["odds", "--a", "THH", "--b", "HHH", "--decimals", "3"]);
    assert_eq!(stdout(&out), "7/8 (0.875)\n");
}

#[test]
fn domain_errors_exit_one_with_a_diagnostic() {
    let same = penney(&["odds", "--a", "HTH", "--b", "HTH"]);
    assert_eq!(same.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&same.stderr).starts_with("error:"));

    let short = penney(&["odds", "--a", "HT", "--b", "HH"]);
    assert_eq!(short.status.code(), Some(1));

    let bad_char = penney(&["conway", "--a", "HXT", "--b", "HHH"]);
    assert_eq!(bad_char.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_char.stderr).contains("illegal character"));
}

#[test]
fn usage_errors_exit_two() {
    let missing = penney(&["odds", "--a", "THH"]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown = penney(&["no-such-command"]);
    assert_eq!(unknown.status.code(), Some(2));
    let empty = penney(&[]);
    assert_eq!(empty.status.code(), Some(2));
}

#[test]
fn conway_json_matches_wire_format() {
    let out = penney(&["conway", "--a", "HHTHT", "--b", "HTHTT", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["n"], 5);
    assert_eq!(value["value"], 10);
    assert_eq!(value["binary"], "01010");
}

#[test]
fn matrix_csv_reproduces_the_published_corner() {
    let out = penney(&["matrix", "-n", "3", "--format", "csv"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert!(lines[0].starts_with("B \\ A,TTT,"));
    // row TTH, column HHH carries 7/10
    let tth: Vec<&str> = lines.iter().find(|l| l.starts_with("TTH,")).unwrap().split(',').collect();
    assert_eq!(*tth.last().unwrap(), "7/10");
}

#[test]
fn cn_table_lists_the_known_counts() {
    let out = penney(&["cn", "--max", "15", "--binary", "--format", "csv", "--no-cache"]);
    let text = stdout(&out);
    for expected in
        ["3,4,100", "7,6,110", "12,166,10100110", "15,1342,10100111110"]
    {
        assert!(text.contains(expected), "missing {expected} in:\n{text}");
    }
}

#[test]
fn alpha_json_reports_the_interval() {
    let out = penney(&["alpha", "--bits", "64", "--positions", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["decimal"], "0.04062582");
    let digits = value["binary_digits"].as_str().unwrap();
    assert!(digits.starts_with("0000101001100110011101"));
    let ones = value["one_positions"].as_array().unwrap();
    assert_eq!(ones[0], 5);
    assert_eq!(ones[1], 7);
}

#[test]
fn stats_row_matches_published_values() {
    let out = penney(&["stats", "--from", "5", "--to", "5", "--format", "csv"]);
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "5,0.65384615,0.71868171,0.33289627,0.46497915,0.22413343");
}

#[test]
fn simulate_is_seed_deterministic() {
    let args = ["simulate", "--a", "THH", "--b", "HHH", "--trials", "20000", "--seed", "7"];
    let first = stdout(&penney(&args));
    let second = stdout(&penney(&args));
    assert_eq!(first, second);
    let other = stdout(&penney(&[
        "simulate", "--a", "THH", "--b", "HHH", "--trials", "20000", "--seed", "8",
    ]));
    assert_ne!(first, other);
}

#[test]
fn oracle_reports_probability_and_states() {
    let out = penney(&["oracle", "--a", "THH", "--b", "HHH"]);
    assert_eq!(stdout(&out), "P(THH before HHH) = 7/8 (0.87500000) [chain states: 7]\n");
    let sweep = penney(&["oracle", "--verify", "-n", "4"]);
    assert!(sweep.status.success());
    assert!(stdout(&sweep).contains("n = 4: ok"));
}

#[test]
fn verify_is_deterministic_and_green() {
    let args = ["verify", "--oracle-n", "3"];
    let first = penney(&args);
    assert!(first.status.success(), "verify failed:\n{}", stdout(&first));
    let second = penney(&args);
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
    assert!(stdout(&first).contains("0 failures"));
}

#[test]
fn flipped_commands_round_trip() {
    let out = penney(&["flipped", "best-response", "--a", "HTHTT"]);
    assert_eq!(
        stdout(&out),
        "flipped best responses to HTHTT: THTTT, THTTH with probability 17/24 (0.70833333)\n"
    );
    let optimal = penney(&["flipped", "optimal", "-n", "6"]);
    assert_eq!(
        stdout(&optimal),
        "n = 6: optimal flipped strings TTTTTT, HHHHHH with Player I probability 1/2 (0.50000000)\n"
    );
    let report = penney(&["flipped", "conjecture3", "-n", "7", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&report)).unwrap();
    assert_eq!(value["holds"], true);
    assert_eq!(value["queries"], 128);
}

#[test]
fn cache_round_trips_through_the_flag_and_environment() {
    let dir = std::env::temp_dir().join(format!("penney-cli-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let flag_path = dir.join("by-flag.json");
    let out = penney(&["cn", "--max", "40", "--cache", flag_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(flag_path.exists(), "cache file should be written");
    let cached: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&flag_path).unwrap()).unwrap();
    assert_eq!(cached["25"], "1363510");
    // a second run loads the same file and still prints the table
    let again = penney(&["cn", "--max", "40", "--cache", flag_path.to_str().unwrap()]);
    assert!(stdout(&again).contains("1363510"));

    // environment variable path
    let env_path: PathBuf = dir.join("by-env.json");
    let out = Command::new(env!("CARGO_BIN_EXE_penney"))
        .args(["cn", "--max", "30"])
        .env("PENNEY_CACHE", &env_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_path.exists(), "PENNEY_CACHE should locate the cache");

    // --no-cache leaves nothing behind
    let none_path = dir.join("never.json");
    let out = penney(&["cn", "--max", "30", "--no-cache", "--cache", none_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(!none_path.exists());

    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("penney-out-{}.txt", std::process::id()));
    let out = penney(&["odds", "--a", "THH", "--b", "HHH", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "7/8 (0.87500000)\n");
    std::fs::remove_file(path).ok();
}
