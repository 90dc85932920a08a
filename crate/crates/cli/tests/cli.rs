use std::path::Path;
use std::process::{Command, Output};

use outage_mpc::plant::read_trace_csv;
use outage_mpc::scenario::parse_weather_csv;
use outage_mpc::ResiliencyMetrics;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_outage-mpc"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn baseline_simulation_writes_trace_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["simulate", "--controller", "baseline", "--days", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_trace_csv(&dir.path().join("baseline_trace.csv")).unwrap();
    assert_eq!(rows.len(), 2 * 144);
    let text = std::fs::read_to_string(dir.path().join("baseline_metrics.toml")).unwrap();
    let m = ResiliencyMetrics::from_toml_str(&text).unwrap();
    assert!((m.days - 2.0).abs() < 1e-12);
    assert_eq!(m.per_day.len(), 2);
    // no solver runs for the rule-based controller
    assert!(!dir.path().join("baseline_solver_log.csv").exists());
}

#[test]
fn proposed_simulation_logs_every_solve() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["simulate", "--days", "1", "--horizon", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let log = std::fs::read_to_string(dir.path().join("proposed_solver_log.csv")).unwrap();
    assert_eq!(log.lines().count(), 1 + 144);
    assert!(log.starts_with("step,status,objective,rel_gap"));
}

#[test]
fn missing_weather_file_is_named_in_the_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nowhere.csv");
    let o = run(
        dir.path(),
        &[
            "simulate",
            "--controller",
            "baseline",
            "--weather",
            missing.to_str().unwrap(),
        ],
    );
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("nowhere.csv"), "{err}");
}

#[test]
fn unknown_controller_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["simulate", "--controller", "fuzzy"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("fuzzy"));
}

#[test]
fn synthetic_weather_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(
            dir.path(),
            &[
                "--seed",
                "7",
                "synth-weather",
                "--days",
                "3",
                "--output",
                p.to_str().unwrap(),
            ],
        );
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let w = parse_weather_csv(&a, 1.0 / 6.0).unwrap();
    assert_eq!(w.len(), 3 * 144);

    // the written file drives a simulation directly
    let o = run(
        dir.path(),
        &[
            "simulate",
            "--controller",
            "baseline",
            "--days",
            "3",
            "--weather",
            a.to_str().unwrap(),
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn size_reports_the_calibrated_system() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["size"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("panels in parallel:      3"), "{s}");
    assert!(s.contains("batteries in series:     2"), "{s}");
    assert!(s.contains("24 V"), "{s}");
    assert!(s.contains("$1100"), "{s}");

    let o = run(dir.path(), &["size", "--storage-days", "2"]);
    assert!(stdout(&o).contains("battery strings:         2"));
}

#[test]
fn compare_and_sweep_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["compare", "--days", "1", "--horizon", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    assert!(table.contains("\nbaseline,") && table.contains("\nproposed,"));

    let o = run(dir.path(), &["sweep-sizes", "--days", "1", "--horizon", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(dir.path().join("sweep_sizes.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows.iter().filter(|r| r.starts_with("baseline,")).count(), 6);
    assert!(rows[6].starts_with("proposed,A,1100,"));
}
