//! Data files and the command implementations behind the `qwalk` binary.
//!
//! | command        | files                                  |
//! |----------------|----------------------------------------|
//! | `run`          | `distribution.csv`, `summary.json`     |
//! | `sweep`        | `sigma_series.csv`, `regression.json`  |
//! | `ensemble`     | `avg_distribution.csv`, `convergence.json` |
//! | `oracle-check` | none, report only                      |
//!
//! Floats are written in Rust's shortest round-trip form, so re-reading a
//! file reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::classical::{binomial_distribution, ensemble_average, oracle_deviation};
use crate::config::WalkConfig;
use crate::error::{Result, WalkError};
use crate::evolve::{self, RNG_DESCRIPTION};
use crate::lattice::LatticePoint;
use crate::stats::{
    position_distribution, regress_sigma, sigma, sigma_series, total_variation, Distribution,
    RegressionResult, SigmaSeries,
};
use crate::tolerance;

pub const DISTRIBUTION_CSV: &str = "distribution.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const SIGMA_CSV: &str = "sigma_series.csv";
pub const REGRESSION_JSON: &str = "regression.json";
pub const ENSEMBLE_CSV: &str = "avg_distribution.csv";
pub const CONVERGENCE_JSON: &str = "convergence.json";

fn versions() -> Value {
    json!({
        "qwalk": env!("CARGO_PKG_VERSION"),
        "rng": RNG_DESCRIPTION,
    })
}

/// `x1,...,xd,probability` header plus one row per positive-mass point.
pub fn distribution_csv(dist: &Distribution) -> String {
    let mut out = String::new();
    for axis in 1..=dist.dim() {
        let _ = write!(out, "x{axis},");
    }
    out.push_str("probability\n");
    for (p, m) in dist.iter() {
        if m == 0.0 {
            continue;
        }
        for x in p.coords() {
            let _ = write!(out, "{x},");
        }
        let _ = writeln!(out, "{m:?}");
    }
    out
}

pub fn parse_distribution_csv(text: &str, source_name: &str) -> Result<Distribution> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| WalkError::Parse {
        source_name: source_name.into(),
        line: 1,
        msg: "empty file".into(),
    })?;
    let dim = header.split(',').count().saturating_sub(1);
    let mut entries = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| WalkError::Parse {
            source_name: source_name.into(),
            line: lineno + 1,
            msg,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(err(format!("expected {} fields, got {}", dim + 1, fields.len())));
        }
        let coords = fields[..dim]
            .iter()
            .map(|f| f.trim().parse::<i64>().map_err(|e| err(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let m = fields[dim]
            .trim()
            .parse::<f64>()
            .map_err(|e| err(e.to_string()))?;
        entries.push((LatticePoint(coords), m));
    }
    Distribution::from_masses(dim, entries)
}

pub fn read_distribution_csv(path: &Path) -> Result<Distribution> {
    parse_distribution_csv(&fs::read_to_string(path)?, &path.display().to_string())
}

pub fn sigma_csv(series: &SigmaSeries) -> String {
    let mut out = String::from("t,sigma\n");
    for (t, s) in &series.samples {
        let _ = writeln!(out, "{t},{s:?}");
    }
    out
}

pub fn parse_sigma_csv(text: &str) -> Result<SigmaSeries> {
    let mut series = SigmaSeries::default();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let parsed = line
            .split_once(',')
            .and_then(|(t, s)| Some((t.trim().parse().ok()?, s.trim().parse().ok()?)));
        match parsed {
            Some((t, s)) => series.samples.push((t, s)),
            None if line.trim().is_empty() => {}
            None => {
                return Err(WalkError::Parse {
                    source_name: SIGMA_CSV.into(),
                    line: lineno + 1,
                    msg: format!("bad row {line:?}"),
                })
            }
        }
    }
    Ok(series)
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn prepare(out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub norm: f64,
    pub sigma: f64,
    pub steps: usize,
    pub support_bounds: Vec<(i64, i64)>,
    #[serde(skip)]
    pub distribution: Distribution,
    #[serde(skip)]
    pub files: Vec<PathBuf>,
}

/// Evolves one walk and writes its final distribution.
pub fn cmd_run(config: &WalkConfig, out_dir: &Path) -> Result<RunReport> {
    config.validate()?;
    let state = evolve::run(config, |_, _| {})?;
    let dist = position_distribution(&state);
    let report = RunReport {
        norm: state.norm(),
        sigma: sigma(&dist),
        steps: state.steps(),
        support_bounds: dist.support_bounds(),
        distribution: dist,
        files: vec![out_dir.join(DISTRIBUTION_CSV), out_dir.join(SUMMARY_JSON)],
    };
    prepare(out_dir)?;
    fs::write(&report.files[0], distribution_csv(&report.distribution))?;
    let mut summary = serde_json::to_value(&report)?;
    summary["config"] = config.to_json();
    summary["versions"] = versions();
    write_json(&report.files[1], &summary)?;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub series: SigmaSeries,
    pub regression: RegressionResult,
    pub files: Vec<PathBuf>,
}

/// Records σ(t) for every step and fits its slope over `t >= t_min`.
pub fn cmd_sweep(config: &WalkConfig, out_dir: &Path) -> Result<SweepReport> {
    config.validate()?;
    let series = sigma_series(config)?;
    let regression = regress_sigma(&series, config.t_min)?;
    let files = vec![out_dir.join(SIGMA_CSV), out_dir.join(REGRESSION_JSON)];
    prepare(out_dir)?;
    fs::write(&files[0], sigma_csv(&series))?;
    let mut value = serde_json::to_value(regression)?;
    value["config"] = config.to_json();
    value["versions"] = versions();
    write_json(&files[1], &value)?;
    Ok(SweepReport {
        series,
        regression,
        files,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleReport {
    pub trials: usize,
    pub master_seed: u64,
    /// Distance from the exact binomial law of the same dimension and length.
    pub total_variation: f64,
    pub sigma_ensemble: f64,
    /// `sqrt(d * t)`, the spread of the classical walk.
    pub sigma_classical: f64,
    #[serde(skip)]
    pub distribution: Distribution,
    #[serde(skip)]
    pub files: Vec<PathBuf>,
}

/// Averages `config.trials` dressed walks and compares with the binomial law.
pub fn cmd_ensemble(config: &WalkConfig, out_dir: &Path) -> Result<EnsembleReport> {
    config.validate()?;
    if !config.dressed {
        return Err(WalkError::NotDressed);
    }
    let dist = ensemble_average(config, config.trials, config.seed)?;
    let classical = binomial_distribution(config.dim, config.steps);
    let report = EnsembleReport {
        trials: config.trials,
        master_seed: config.seed,
        total_variation: total_variation(&dist, &classical)?,
        sigma_ensemble: sigma(&dist),
        sigma_classical: ((config.dim * config.steps) as f64).sqrt(),
        distribution: dist,
        files: vec![out_dir.join(ENSEMBLE_CSV), out_dir.join(CONVERGENCE_JSON)],
    };
    prepare(out_dir)?;
    fs::write(&report.files[0], distribution_csv(&report.distribution))?;
    let mut value = serde_json::to_value(&report)?;
    value["config"] = config.to_json();
    value["versions"] = versions();
    write_json(&report.files[1], &value)?;
    Ok(report)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OracleReport {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares the state-vector engine with path-sum enumeration.
pub fn cmd_oracle_check(config: &WalkConfig) -> Result<OracleReport> {
    config.validate()?;
    let max_deviation = oracle_deviation(config)?;
    Ok(OracleReport {
        max_deviation,
        tolerance: tolerance::ORACLE_AMPLITUDE,
        passed: max_deviation <= tolerance::ORACLE_AMPLITUDE,
    })
}
