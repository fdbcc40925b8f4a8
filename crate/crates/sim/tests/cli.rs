use std::path::Path;
use std::process::{Command, Output};

fn irs_sim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irs-sim"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

const SCENARIO: &str = "tx_antennas = 12\nrx_antennas = 10\nelements = 20\nsubsurfaces = 2\ntrials = 16\nseed = 5\n";

#[test]
fn simulate_writes_both_files_and_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.toml"), SCENARIO).unwrap();
    let mut csvs = Vec::new();
    for threads in ["1", "3"] {
        let out = format!("out{threads}");
        let o = irs_sim(&["--threads", threads, "simulate", "--config", "s.toml", "--out", &out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        csvs.push(std::fs::read(dir.path().join(&out).join("results.csv")).unwrap());
        assert!(dir.path().join(&out).join("summary.json").exists());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn seed_and_trial_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.toml"), SCENARIO).unwrap();
    let o = irs_sim(&["simulate", "--config", "s.toml", "--seed", "9", "--trials", "3", "--out", "o"], dir.path());
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("o/results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let summary = std::fs::read_to_string(dir.path().join("o/summary.json")).unwrap();
    assert!(summary.contains("\"seed\": 9"));

    // a summary replays the run it describes
    let o = irs_sim(&["simulate", "--config", "o/summary.json", "--out", "r"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("r/results.csv")).unwrap());
}

#[test]
fn bad_input_exits_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "tx_antennas = 0\nrx_antennas = 4\nelements = 4\nsubsurfaces = 1\n").unwrap();
    let o = irs_sim(&["simulate", "--config", "bad.toml"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("tx_antennas"));

    let o = irs_sim(&["figure", "fig3"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown figure"));

    let o = irs_sim(&["figure", "fig2", "--set", "trials"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn figure_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = irs_sim(&["figure", "fig2", "--out", "f", "--set", "trials=5"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("f/fig2.csv")).unwrap();
    assert!(csv.starts_with("N,curve,mean,stderr,trials\n"));
    assert_eq!(csv.lines().count(), 1 + 7 * 4);
}

#[test]
fn calculators() {
    let dir = tempfile::tempdir().unwrap();
    let o = irs_sim(&["optimal-k", "--rate", "30", "--M", "1000"], dir.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("K* = 12.2"));

    let p10 = irs_sim(&["power", "--rate", "15", "--K", "5", "--N", "10"], dir.path());
    let p100 = irs_sim(&["power", "--rate", "15", "--K", "5", "--N", "100"], dir.path());
    assert!(p10.status.success() && p100.status.success());
    let dbm = |o: &Output| -> f64 {
        let s = String::from_utf8_lossy(&o.stdout).to_string();
        let tail = &s[s.find("W (").unwrap() + 3..];
        tail[..tail.find(" dBm").unwrap()].parse().unwrap()
    };
    assert!((dbm(&p10) - dbm(&p100) - 20.0).abs() < 1e-9);
}
