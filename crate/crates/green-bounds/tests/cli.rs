//! End-to-end checks of the command-line interface: exit codes, JSON shape,
//! config-file precedence, and deterministic output.

use std::path::PathBuf;
use std::process::{Command, Output};

use green_bounds::green_assembly::BoundReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_green-bounds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("green-bounds-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("config file should be writable");
    path
}

#[test]
fn bound_text_succeeds_for_the_worked_level() {
    let out = run(&["bound", "--family", "gamma0", "--level", "11"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("gamma0(11)"));
    assert!(text.contains("S = 172.099836"));
    assert!(text.contains("valid from level 46"));
}

#[test]
fn bound_json_has_versioned_schema_and_round_trips() {
    let out = run(&["bound", "--family", "gamma0", "--level", "11", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["kind"], "bound-report");
    assert_eq!(doc["family"], "gamma0");
    assert_eq!(doc["level"], 11);
    let s = doc["report"]["S"].as_f64().unwrap();
    assert!((s - 172.1).abs() <= 0.2, "S = {s}");
    let names: Vec<&str> = doc["constants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for required in ["eta", "delta", "C", "S", "zeta", "regime_a_hi", "global_c2"] {
        assert!(names.contains(&required), "missing constant {required}");
    }
    // the embedded report deserializes into the library type and back
    let report: BoundReport = serde_json::from_value(doc["report"].clone()).unwrap();
    let reserialized = serde_json::to_value(&report).unwrap();
    assert_eq!(reserialized, doc["report"]);
}

#[test]
fn bound_without_level_is_a_usage_error() {
    let out = run(&["bound"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["bound", "--level", "11", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn genus_zero_level_is_reported_with_its_own_exit_code() {
    let out = run(&["bound", "--family", "gamma0", "--level", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("genus"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override_it() {
    let cfg = tmp_file("merge.conf", "family = gamma0\nlevel = 11\n# comment line\n");
    let cfg_s = cfg.to_str().unwrap();

    // config alone supplies the required level
    let out = run(&["--config", cfg_s, "bound"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("gamma0(11)"));

    // a flag overrides the config value: level 1 has genus zero
    let out = run(&["--config", cfg_s, "bound", "--level", "1"]);
    assert_eq!(out.status.code(), Some(3));

    std::fs::remove_file(cfg).ok();
}

#[test]
fn missing_config_file_is_a_usage_error() {
    let out = run(&["--config", "/nonexistent/green-bounds.conf", "bound", "--level", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_grid_step_is_rejected() {
    let out = run(&["count", "--b", "2.0", "--grid", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_json_certificate_dominates_samples_and_is_deterministic() {
    let args = ["count", "--b", "2.5", "--grid", "0.05", "--format", "json"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    let cert = doc["certificate"]["certified_sup"].as_u64().unwrap();
    let sample = doc["certificate"]["max_sample"].as_u64().unwrap();
    assert!(cert >= sample);
    assert_eq!(doc["spot_check"]["status"], "ok");

    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "count output must be reproducible");
}

#[test]
fn fsup_and_shc_run_with_defaults() {
    let out = run(&["fsup"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).is_empty());

    let out = run(&["shc", "--a", "1.44"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["shc", "--a", "1.44", "--s", "0", "--k", "2", "--u", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}
