use std::path::Path;
use std::process::{Command, Output};

fn cbsv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbsv")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.json");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SMALL: &str = r#"{"grid": {"n": 16}, "time": {"T": 0.1, "M": 8}}"#;

#[test]
fn bad_suite_name_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbsv(&["verify", "nonsense", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"grid": {"n": 12}}"#);
    let out = cbsv(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n must be a power of two"));

    let cfg = write_config(dir.path(), r#"{"params": {"viscocity": 1.0}}"#);
    let out = cbsv(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("viscocity"));
}

#[test]
fn simulate_writes_m_plus_one_rows_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let mut csvs = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let out = cbsv(&["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--seed", "7"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let csv = std::fs::read(out_dir.join("simulate.csv")).unwrap();
        let text = String::from_utf8(csv.clone()).unwrap();
        let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
        assert_eq!(lines[0], "t,l2,h12,hybrid,energy_budget");
        assert_eq!(lines.len(), 1 + 9);
        assert!(out_dir.join("simulate_final.cbsv").exists());
        csvs.push((csv, std::fs::read(out_dir.join("simulate_final.cbsv")).unwrap()));
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn propagate_then_analyze_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("o");
    let o = out_dir.to_str().unwrap();
    assert!(cbsv(&["propagate", "--config", &cfg, "--out", o]).status.success());
    let snap = out_dir.join("propagate_final.cbsv");
    let out = cbsv(&["analyze", "--config", &cfg, "--out", o, "--snapshot", snap.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let norms = std::fs::read_to_string(out_dir.join("analyze_norms.csv")).unwrap();
    assert!(norms.starts_with("quantity,value"));
    assert!(norms.contains("hybrid"));
}

#[test]
fn picard_small_data_converges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"grid": {"n": 16}, "time": {"T": 0.25, "M": 8},
            "data": {"kind": "random_solenoidal", "amplitude": 0.05}}"#,
    );
    let out = cbsv(&["picard", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("picard.csv").exists());
}

#[test]
fn verify_partition_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbsv(&["verify", "partition", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("suite partition: PASS"));
    assert!(dir.path().join("partition_checks.csv").exists());
}
