use std::path::Path;
use std::process::{Command, Output};

fn qtele(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtele"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

#[test]
fn quasi_distill_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let res = qtele(
            &["sigma-quasi-distill", "--seed", "4", "--F", "0.3", "--n-max", "25"],
            out,
        );
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    let first = std::fs::read_to_string(a.join("sigma-quasi-distill.csv")).unwrap();
    assert_eq!(
        first,
        std::fs::read_to_string(b.join("sigma-quasi-distill.csv")).unwrap()
    );
    assert!(first.starts_with("n,fraction,probability\n"));
    assert_eq!(first.lines().count(), 26);
}

#[test]
fn seeded_monte_carlo_run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "fidelity-theorem-sweep",
        "--seed",
        "9",
        "--d",
        "2",
        "--samples",
        "300",
        "--p",
        "0.4",
    ];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(qtele(&args, &a).status.success());
    assert!(qtele(&args, &b).status.success());
    let read = |p: &Path| std::fs::read(p.join("fidelity-theorem-sweep.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn manifest_echoes_flags() {
    let dir = tempfile::tempdir().unwrap();
    let res = qtele(&["rho-threshold", "--seed", "12", "--trials", "50"], dir.path());
    assert!(res.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["experiment"], "rho-threshold");
    assert_eq!(manifest["config"]["seed"], 12);
    assert_eq!(manifest["config"]["trials"], 50);

    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rho-threshold.json")).unwrap()).unwrap();
    let records = trace["trace"].as_array().unwrap();
    assert_eq!(records.len(), 50);
    for key in ["trial", "filter", "fraction", "probability"] {
        assert!(records[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn invalid_state_file_names_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    // Hermitian with unit trace but eigenvalues 1.5 and -0.5.
    std::fs::write(&state, r#"{"d_a":1,"d_b":2,"matrix":[[0.5,0],[1,0],[1,0],[0.5,0]]}"#).unwrap();
    let res = Command::new(env!("CARGO_BIN_EXE_qtele"))
        .args(["sigma-quasi-distill", "--seed", "1", "--state"])
        .arg(&state)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("positive-semidefinite"));
}

#[test]
fn unknown_subcommand_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!qtele(&["no-such-experiment", "--seed", "1"], dir.path())
        .status
        .success());
}

#[test]
fn every_experiment_runs_with_small_budgets() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "isomorphism-roundtrip",
        "fidelity-theorem-sweep",
        "twirl-convergence",
        "teleport-calibration",
        "classical-baseline",
        "ppt-bound",
        "sigma-quasi-distill",
        "rho-threshold",
        "witness-demo",
    ] {
        let out = dir.path().join(name);
        let res = qtele(&[name, "--seed", "3", "--samples", "200", "--trials", "20"], &out);
        assert!(res.status.success(), "{name}: {}", String::from_utf8_lossy(&res.stderr));
        assert!(out.join("manifest.json").exists());
    }
}

#[test]
fn channel_file_is_scored_by_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("channel.json");
    let ch = qtele::channels::depolarizing(2, 0.5).unwrap();
    std::fs::write(&path, ch.to_json_string().unwrap()).unwrap();
    let out = dir.path().join("out");
    let res = Command::new(env!("CARGO_BIN_EXE_qtele"))
        .args([
            "fidelity-theorem-sweep",
            "--seed",
            "2",
            "--d",
            "2",
            "--samples",
            "200",
            "--p",
            "1",
            "--channel",
        ])
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = std::fs::read_to_string(out.join("fidelity-theorem-sweep.csv")).unwrap();
    let row: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .skip(1)
        .map(|x| x.parse().unwrap())
        .collect();
    // depolarizing with p = 1/2 on a qubit: F = 5/8, f = 3/4
    assert!((row[0] - 0.625).abs() < 1e-12 && (row[1] - 0.75).abs() < 1e-12);
}
