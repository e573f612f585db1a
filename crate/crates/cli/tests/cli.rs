//! End-to-end tests of the `twistqa` binary: tiny configurations, real runs.

use std::path::Path;
use std::process::{Command, Output};

fn twistqa(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistqa"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TINY_Z: &str = "# single-qubit problem\n1.0 0.0 Z\n";

fn tiny_config(extra: &str) -> String {
    format!(
        r#"
problem = "pauli_file"
pauli_path = "z.txt"
annealing_time = 40.0
n_time_steps = 400
gamma = 0.0
alpha = 0.05
n_steps = 3
seed = 11
n_points = 21
n_levels = 2
{extra}
"#
    )
}

#[test]
fn run_single_emits_files_and_reaches_ground_energy() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(dir.path(), "cfg.toml", &tiny_config(""));
    let out = twistqa(&["--config", &cfg, "--out", "results", "run"], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let results = dir.path().join("results");
    for name in ["trajectory.csv", "merit.csv", "manifest.json"] {
        assert!(results.join(name).exists(), "{name} missing");
    }
    // gamma = 0, T = 40 on a single qubit: energy annealed to -1
    let merit = std::fs::read_to_string(results.join("merit.csv")).unwrap();
    let last = merit.lines().last().unwrap();
    let energy: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
    assert!(
        (energy + 1.0).abs() < 1e-3,
        "final energy {energy}, expected about -1"
    );

    let manifest = std::fs::read_to_string(results.join("manifest.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(parsed["seed"], 11);
    assert_eq!(parsed["command"], "run");
    assert!(parsed["config"]["annealing_time"].as_f64().unwrap() > 0.0);
}

#[test]
fn zero_step_run_records_only_the_initial_row() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(
        dir.path(),
        "cfg.toml",
        &tiny_config("").replace("n_steps = 3", "n_steps = 0"),
    );
    let out = twistqa(&["--config", &cfg, "--out", "o", "run"], dir.path());
    assert!(out.status.success());
    let trajectory = std::fs::read_to_string(dir.path().join("o/trajectory.csv")).unwrap();
    let rows: Vec<&str> = trajectory.lines().collect();
    assert_eq!(rows.len(), 2, "header plus exactly one row: {rows:?}");
    assert!(rows[0].starts_with("step,energy,error,theta_0"));
    assert!(rows[1].starts_with("0,"));
}

#[test]
fn timescan_emits_csv_and_t_opt_is_in_the_set() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(
        dir.path(),
        "cfg.toml",
        &tiny_config("scan_t = [5.0, 20.0, 40.0]"),
    );
    let out = twistqa(&["--config", &cfg, "--out", "o", "timescan"], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("o/timescan.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "T,conventional_energy,conventional_error,twisted_energy,twisted_error"
    );
    assert_eq!(lines.count(), 3);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let t_opt_line = stdout
        .lines()
        .find(|l| l.starts_with("T_opt(twisted)"))
        .unwrap();
    let t_opt: f64 = t_opt_line
        .split_whitespace()
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!([5.0, 20.0, 40.0].contains(&t_opt), "T_opt = {t_opt}");
}

#[test]
fn spectrum_zero_theta_endpoints_match_driver_and_problem() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(dir.path(), "cfg.toml", &tiny_config(""));
    let out = twistqa(&["--config", &cfg, "--out", "o", "spectrum"], dir.path());
    assert!(out.status.success());

    let spectrum = std::fs::read_to_string(dir.path().join("o/spectrum.csv")).unwrap();
    let rows: Vec<&str> = spectrum.lines().collect();
    assert_eq!(rows[0], "t,E0,E1");
    let first: Vec<f64> = rows[1].split(',').map(|v| v.parse().unwrap()).collect();
    let last: Vec<f64> = rows
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    // driver -X: spectrum {-1, 1); problem Z: {-1, 1}
    assert!((first[1] + 1.0).abs() < 1e-12 && (first[2] - 1.0).abs() < 1e-12);
    assert!((last[1] + 1.0).abs() < 1e-12 && (last[2] - 1.0).abs() < 1e-12);

    for name in ["gaps.csv", "adiabatic.csv"] {
        let text = std::fs::read_to_string(dir.path().join("o").join(name)).unwrap();
        assert!(!text.contains("NaN") && !text.contains("inf"), "{name}");
    }
}

#[test]
fn spectrum_accepts_thetas_file_and_rejects_wrong_length() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(dir.path(), "cfg.toml", &tiny_config(""));
    let thetas = write(dir.path(), "thetas.txt", "0.5\n");
    let ok = twistqa(
        &[
            "--config", &cfg, "--out", "o", "spectrum", "--thetas", &thetas,
        ],
        dir.path(),
    );
    assert!(ok.status.success());

    let bad = write(dir.path(), "bad.txt", "0.5 0.25\n");
    let err = twistqa(
        &["--config", &cfg, "--out", "o", "spectrum", "--thetas", &bad],
        dir.path(),
    );
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "problem = \"unknown\"\n");
    let out = twistqa(&["--config", &cfg, "run"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("config error"), "{stderr}");

    let missing = twistqa(&["run"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn numerical_abort_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    // 8 steps over T=200 with an O(1) Hamiltonian is far outside RK4
    // stability, so the trace-drift guard trips.
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(
        dir.path(),
        "cfg.toml",
        &tiny_config("")
            .replace("annealing_time = 40.0", "annealing_time = 200.0")
            .replace("n_time_steps = 400", "n_time_steps = 8"),
    );
    let out = twistqa(&["--config", &cfg, "--out", "o", "run"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("numerical abort"), "{stderr}");
}

#[test]
fn snapshots_and_state_dumps_are_emitted_on_request() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(dir.path(), "cfg.toml", &tiny_config(""));
    let out = twistqa(
        &[
            "--config",
            &cfg,
            "--out",
            "o",
            "run",
            "--snapshots",
            "5",
            "--dump-states",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in ["snapshots_conventional.csv", "snapshots_twisted.csv"] {
        let text = std::fs::read_to_string(dir.path().join("o").join(name)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,trace_re,purity,energy");
        assert_eq!(lines.len(), 6, "{name}: header plus 5 samples");
    }
    for name in ["final_conventional.bin", "final_twisted.bin"] {
        let bytes = std::fs::read(dir.path().join("o").join(name)).unwrap();
        // 2x2 complex doubles, row-major little-endian
        assert_eq!(bytes.len(), 4 * 16, "{name}");
        let e00 = f64::from_le_bytes(bytes[0..8].try_into().unwrap());
        let e11 = f64::from_le_bytes(bytes[48..56].try_into().unwrap());
        assert!(
            (e00 + e11 - 1.0).abs() < 1e-9,
            "trace from dump: {}",
            e00 + e11
        );
    }
}

#[test]
fn presets_list_names_shipped_presets() {
    let dir = tempfile::tempdir().unwrap();
    let out = twistqa(&["presets", "list"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("hydrogen-paper"));
    assert!(stdout.contains("spinstar-paper"));
}

#[test]
fn jobs_and_seed_flags_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(dir.path(), "cfg.toml", &tiny_config(""));
    let out = twistqa(
        &[
            "--config", &cfg, "--out", "o", "--jobs", "1", "--seed", "99", "run",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let manifest = std::fs::read_to_string(dir.path().join("o/manifest.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(parsed["seed"], 99);
    assert_eq!(parsed["jobs"], 1);
}

#[test]
fn identical_seeds_reproduce_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", TINY_Z);
    let cfg = write(dir.path(), "cfg.toml", &tiny_config(""));
    for out_name in ["a", "b"] {
        let out = twistqa(&["--config", &cfg, "--out", out_name, "run"], dir.path());
        assert!(out.status.success());
    }
    let a = std::fs::read_to_string(dir.path().join("a/trajectory.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b/trajectory.csv")).unwrap();
    assert_eq!(a, b);
}
