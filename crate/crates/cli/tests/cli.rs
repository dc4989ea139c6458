use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cascade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cascade"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_owned()
}

fn read_column(path: &Path, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let i = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|rec| rec.unwrap()[i].to_owned()).collect()
}

#[test]
fn simulate_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = cascade(&[
            "simulate", "--model", "nonstationary", "--lambda2", "1", "--ell", "1", "--n", "500", "--seed", "7",
            "--out", &out_arg(dir),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["omega.csv", "measure.csv", "mrw.csv"] {
        let x = fs::read(a.join(file)).unwrap();
        assert_eq!(x, fs::read(b.join(file)).unwrap(), "{file}");
        let rows = read_column(&a.join(file), "t");
        assert!(rows.len() >= 500, "{file}: {}", rows.len());
    }
    assert!(a.join("config.json").exists());
}

#[test]
fn zero_intermittency_gives_flat_field() {
    let tmp = TempDir::new().unwrap();
    let out = cascade(&["simulate", "--lambda2", "0", "--n", "64", "--seed", "1", "--out", &out_arg(tmp.path())]);
    assert!(out.status.success());
    let omega = read_column(&tmp.path().join("omega.csv"), "omega");
    assert!(omega.iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    let t = read_column(&tmp.path().join("measure.csv"), "t");
    let m = read_column(&tmp.path().join("measure.csv"), "M");
    for (t, m) in t.iter().zip(&m) {
        let (t, m): (f64, f64) = (t.parse().unwrap(), m.parse().unwrap());
        assert!((m - t).abs() < 1e-9 * t.max(1.0), "{t} {m}");
    }
}

#[test]
fn config_file_and_flags() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.json");
    fs::write(&cfg, r#"{"lambda2": 0.05, "n": 32, "seed": 3, "format": "json"}"#).unwrap();
    let dir = tmp.path().join("out");
    let out = cascade(&["simulate", "--config", cfg.to_str().unwrap(), "--n", "16", "--out", &out_arg(&dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let written: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("config.json")).unwrap()).unwrap();
    assert_eq!(written["grid"]["n"], 16);
    assert_eq!(written["seed"], 3);
    assert_eq!(written["params"]["lambda2"], 0.05);
    let omega: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("omega.json")).unwrap()).unwrap();
    assert!(omega.as_array().unwrap().iter().all(|r| r.get("omega").is_some()));
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("bad.json");
    fs::write(&cfg, r#"{"lambda": 0.05}"#).unwrap();
    let out = cascade(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "1", "--out", &out_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let dir = out_arg(tmp.path());
    let cases: [&[&str]; 4] = [
        &["simulate", "--model", "stationary", "--seed", "1", "--out", &dir],
        &["simulate", "--model", "nonstationary", "--T", "10", "--seed", "1", "--out", &dir],
        &["simulate", "--lambda2", "-1", "--seed", "1", "--out", &dir],
        &["simulate", "--out", &dir],
    ];
    for args in cases {
        let out = cascade(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = cascade(&["reproduce", "fig9", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_rejects_short_series() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("short.csv");
    let mut text = String::from("date,open,high,low,close\n");
    for d in 1..=10 {
        text.push_str(&format!("2020-01-{d:02},100,101,99,100.5\n"));
    }
    fs::write(&input, text).unwrap();
    let out = cascade(&["analyze", input.to_str().unwrap(), "--out", &out_arg(&tmp.path().join("a"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("series too short"));
}

#[test]
fn missing_input_is_an_io_error() {
    let tmp = TempDir::new().unwrap();
    let out = cascade(&["analyze", tmp.path().join("none.csv").to_str().unwrap(), "--out", &out_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn synthetic_bars_round_trip_through_analyze() {
    let tmp = TempDir::new().unwrap();
    let bars = tmp.path().join("bars");
    let out = cascade(&["synth-ohlc", "--n", "3000", "--seed", "5", "--out", &out_arg(&bars)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = bars.join("ohlc.csv");
    let res = tmp.path().join("res");
    let out = cascade(&[
        "analyze", csv.to_str().unwrap(), "--delta-t", "16,32,64", "--out", &out_arg(&res),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_column(&res.join("magnitude.csv"), "omega").len(), 3000);
    assert_eq!(read_column(&res.join("scan.csv"), "delta_t"), ["16.0", "32.0", "64.0"]);
    assert!(res.join("covariance.csv").exists() && res.join("config.json").exists());
}

#[test]
fn degenerate_scan_without_intermittency() {
    let tmp = TempDir::new().unwrap();
    let out = cascade(&[
        "reproduce", "fig6c", "--lambda2", "0", "--n", "4096", "--reps", "1", "--out", &out_arg(tmp.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("summary.json")).unwrap()).unwrap();
    let windows = summary["details"]["windows"].as_array().unwrap();
    assert!(!windows.is_empty());
    assert!(windows.iter().all(|w| w["degenerate"] == true));
    let cov = read_column(&tmp.path().join("fig6c_empirical.csv"), "cov");
    assert!(cov.iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
}
