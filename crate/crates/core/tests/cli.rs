use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn uepsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uepsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) {
    let out = uepsim(args);
    assert!(
        out.status.success(),
        "uepsim {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p
}

fn rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().skip(1).map(str::to_string).collect()
}

const SCHEDULE: &str = r#"{ "sim": { "horizon": 300 } }"#;
const FULLSYSTEM: &str = r#"{ "sim": { "horizon": 300 }, "ebno_grid": [1.2, 1.6, 2.0], "injection_probs": [0.5] }"#;
const WEBPAGE: &str = r#"{ "profile_trials": 100, "items": 2, "page_downscale": 8 }"#;
const VIDEO: &str = r#"{ "mode": "video", "profile_trials": 100, "items": 1, "frame_width": 16, "frame_height": 16 }"#;

#[test]
fn characterize_writes_one_row_per_position() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("c");
    run_ok(&["characterize", "--trials", "20", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(rows(&out.join("profile.csv")).len(), 512);
    assert!(out.join("summary.json").exists());
}

#[test]
fn zero_trials_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = uepsim(&["characterize", "--trials", "0", "--out", tmp.path().to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
}

#[test]
fn unknown_mode_is_a_usage_error() {
    let out = uepsim(&["transmit", "--mode", "audio"]);
    assert!(!out.status.success());
}

#[test]
fn transmit_sweeps_have_expected_rows() {
    let tmp = TempDir::new().unwrap();
    let web = write_config(tmp.path(), "web.json", WEBPAGE);
    let out = tmp.path().join("w");
    run_ok(&["transmit", "--config", web.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let r = rows(&out.join("transmit.csv"));
    let points: std::collections::BTreeSet<&str> = r.iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(points.len(), 8);

    let vid = write_config(tmp.path(), "vid.json", VIDEO);
    let out = tmp.path().join("v");
    run_ok(&["transmit", "--config", vid.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(rows(&out.join("transmit.csv")).len(), 15);
}

#[test]
fn schedule_covers_algorithms_and_probabilities() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "s.json", SCHEDULE);
    let out = tmp.path().join("s");
    run_ok(&["schedule", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(rows(&out.join("schedule.csv")).len(), 40);
}

#[test]
fn missing_gain_table_is_named() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "s.json", r#"{ "gain_table": "no_such_table.json" }"#);
    let out = uepsim(&["schedule", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_table.json"));
}

#[test]
fn fullsystem_grid_and_zero_baseline() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "f.json", FULLSYSTEM);
    let out = tmp.path().join("f");
    run_ok(&["fullsystem", "--config", cfg.to_str().unwrap(), "--trials", "2", "--out", out.to_str().unwrap()]);
    let r = rows(&out.join("fullsystem.csv"));
    // 3 scenarios x 3 Eb/No x 1 probability x 2 seeds
    assert_eq!(r.len(), 18);
    for line in r.iter().filter(|l| l.starts_with("4L,")) {
        let gain: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(gain, 0.0);
    }
}

#[test]
fn every_command_is_byte_identical_on_rerun() {
    let tmp = TempDir::new().unwrap();
    let configs = [
        ("characterize", None, "profile.csv"),
        ("transmit", Some(WEBPAGE), "transmit.csv"),
        ("schedule", Some(SCHEDULE), "schedule.csv"),
        ("fullsystem", Some(FULLSYSTEM), "fullsystem.csv"),
    ];
    for (cmd, json, file) in configs {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = tmp.path().join(format!("{cmd}{run}"));
            let mut args = vec![cmd.to_string(), "--seed".into(), "11".into(), "--out".into(), out.display().to_string()];
            if let Some(j) = json {
                let c = write_config(tmp.path(), &format!("{cmd}.json"), j);
                args.extend(["--config".into(), c.display().to_string()]);
            }
            if cmd == "characterize" {
                args.extend(["--trials".into(), "20".into()]);
            }
            let a: Vec<&str> = args.iter().map(String::as_str).collect();
            run_ok(&a);
            outputs.push(fs::read(out.join(file)).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{cmd} output differs between runs");
    }
}
