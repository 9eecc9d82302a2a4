use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qwalk::io::{parse_sigma_csv, read_distribution_csv};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_zero_steps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = qwalk(&["run", "--dim", "2", "--steps", "0", "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(dir.path().join("distribution.csv")).unwrap(),
        "x1,x2,probability\n0,0,1.0\n"
    );
    let summary = json(&dir.path().join("summary.json"));
    assert_eq!(summary["norm"], 1.0);
    assert_eq!(summary["config"]["dim"], 2);
    assert!(summary["versions"]["rng"].is_string());
}

#[test]
fn run_grover_reaches_the_corners() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = qwalk(&["run", "--dim", "2", "--coin", "grover", "--steps", "100", "--out-dir", out]);
    assert!(o.status.success());
    let dist = read_distribution_csv(&dir.path().join("distribution.csv")).unwrap();
    assert!((dist.total() - 1.0).abs() < 1e-9);
    let edge: f64 = dist
        .iter()
        .filter(|(p, _)| p.coords().iter().any(|x| x.abs() == 100))
        .map(|(_, m)| m)
        .sum();
    assert!(edge > 1e-3, "mass at |x|_inf = 100 is {edge}");
}

#[test]
fn sweep_writes_series_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = qwalk(&["sweep", "--coin", "hadamard", "--initial", "minus", "--out-dir", out]);
    assert!(o.status.success());
    let series = parse_sigma_csv(&fs::read_to_string(dir.path().join("sigma_series.csv")).unwrap()).unwrap();
    assert_eq!(series.samples.len(), 100);
    let fit = json(&dir.path().join("regression.json"));
    assert!((fit["slope"].as_f64().unwrap() - 0.4544).abs() < 0.005);
    assert_eq!(fit["t_min"], 10);
    assert_eq!(fit["config"]["coin"], "hadamard");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("walk.cfg");
    fs::write(&cfg, "dim = 2\ncoin = grover\ninitial = singlet\nsteps = 100\n").unwrap();
    let out = dir.path().join("out");
    let o = qwalk(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--coin",
        "dft",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fit = json(&out.join("regression.json"));
    assert_eq!(fit["config"]["coin"], "dft");
    assert!((fit["slope"].as_f64().unwrap() - 0.6009).abs() < 0.006);
}

#[test]
fn ensemble_files_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = qwalk(&[
            "ensemble", "--dressed", "--trials", "1", "--seed", "17", "--steps", "30", "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["avg_distribution.csv", "convergence.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let report = json(&a.path().join("convergence.json"));
    assert_eq!(report["trials"], 1);
    assert!((report["sigma_classical"].as_f64().unwrap() - 30f64.sqrt()).abs() < 1e-12);
}

#[test]
fn ensemble_requires_dressed() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwalk(&["ensemble", "--steps", "5", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_check_exit_codes() {
    let o = qwalk(&["oracle-check", "--steps", "10"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], true);

    let o = qwalk(&["oracle-check", "--dim", "2", "--coin", "dft", "--steps", "6"]);
    assert!(o.status.success());

    let o = qwalk(&["oracle-check", "--dim", "2", "--steps", "7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d*steps <= 12"));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["run", "--dim", "3", "--initial", "singlet"][..],
        &["run", "--dim", "9"],
        &["run", "--coin", "nope"],
        &["run", "--steps", "-4"],
        &["sweep", "--steps", "2"],
    ] {
        let o = qwalk(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn memory_refusal_exit_3() {
    let o = qwalk(&["run", "--dim", "4", "--steps", "1000", "--out-dir", "/nonexistent"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn custom_coin_file() {
    let dir = tempfile::tempdir().unwrap();
    let coin = dir.path().join("coin.txt");
    // the d = 2 Grover formula applied at d = 3
    let s = 8f64.sqrt().recip();
    let rows: Vec<String> = (0..8)
        .map(|r| (0..8).map(|c| if r == c { -s } else { s }.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    fs::write(&coin, rows.join("\n")).unwrap();
    let spec = format!("custom:{}", coin.display());
    let o = qwalk(&["run", "--dim", "3", "--coin", &spec, "--steps", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not unitary"));

    let h = 2f64.sqrt().recip();
    fs::write(&coin, format!("{h} {h}\n{h} -{h}\n")).unwrap();
    let o = qwalk(&["oracle-check", "--coin", &spec, "--steps", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
