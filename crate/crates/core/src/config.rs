//! Experiment descriptor and its flat `key = value` text form.
//!
//! ```text
//! # Grover coin started from the singlet
//! dim = 2
//! coin = grover
//! initial = singlet
//! steps = 100
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::lattice::{check_dim, InternalState, StandardState};
use crate::tolerance;

#[derive(Clone, Debug, PartialEq)]
pub enum CoinSpec {
    Hadamard,
    Dft,
    Grover,
    /// Matrix read from a text file, one row per line.
    Custom(PathBuf),
    /// Matrix supplied in code.
    Matrix(CoinOperator),
}

impl CoinSpec {
    pub fn build(&self, dim: usize) -> Result<CoinOperator> {
        let coin = match self {
            CoinSpec::Hadamard => CoinOperator::hadamard_tensor(dim)?,
            CoinSpec::Dft => CoinOperator::dft(dim)?,
            CoinSpec::Grover => CoinOperator::grover(dim)?,
            CoinSpec::Custom(path) => read_coin_file(path, dim)?,
            CoinSpec::Matrix(m) => m.clone(),
        };
        if coin.dim() != dim {
            return Err(WalkError::DimensionMismatch {
                coin: coin.dim(),
                state: dim,
            });
        }
        Ok(coin)
    }
}

impl fmt::Display for CoinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinSpec::Hadamard => write!(f, "hadamard"),
            CoinSpec::Dft => write!(f, "dft"),
            CoinSpec::Grover => write!(f, "grover"),
            CoinSpec::Custom(p) => write!(f, "custom:{}", p.display()),
            CoinSpec::Matrix(_) => write!(f, "matrix"),
        }
    }
}

impl FromStr for CoinSpec {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("custom:") {
            return Ok(CoinSpec::Custom(PathBuf::from(path)));
        }
        match s.to_ascii_lowercase().as_str() {
            "hadamard" | "h" => Ok(CoinSpec::Hadamard),
            "dft" | "fourier" => Ok(CoinSpec::Dft),
            "grover" | "g" => Ok(CoinSpec::Grover),
            other => Err(WalkError::Config(format!("unknown coin {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialSpec {
    Standard(StandardState),
    Explicit(Vec<Complex64>),
}

impl InitialSpec {
    pub fn build(&self, dim: usize) -> Result<InternalState> {
        match self {
            InitialSpec::Standard(name) => InternalState::standard(*name, dim),
            InitialSpec::Explicit(amps) => InternalState::new(dim, amps.clone()),
        }
    }
}

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialSpec::Standard(name) => write!(f, "{}", name.name()),
            InitialSpec::Explicit(amps) => {
                let parts: Vec<String> = amps.iter().map(format_complex).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FromStr for InitialSpec {
    type Err = WalkError;

    /// A standard name, or a comma-separated amplitude list such as `0.7071067811865476,0.7071067811865476i`.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(name) = s.parse::<StandardState>() {
            return Ok(InitialSpec::Standard(name));
        }
        let amps = s
            .split(',')
            .map(|tok| parse_complex(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(InitialSpec::Explicit(amps))
    }
}

fn format_complex(c: &Complex64) -> String {
    format!("{:?}{:+?}i", c.re, c.im)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also accepts `j` for the imaginary unit).
pub fn parse_complex(tok: &str) -> Result<Complex64> {
    let normalized = tok.trim().replace('j', "i");
    normalized
        .parse::<Complex64>()
        .map_err(|_| WalkError::Config(format!("cannot parse complex number {tok:?}")))
}

/// Reads a coin matrix: one row per line, whitespace-separated complex entries,
/// `#` starts a comment.
pub fn read_coin_file(path: &Path, dim: usize) -> Result<CoinOperator> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| WalkError::Parse {
                source_name: path.display().to_string(),
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        rows.push(row);
    }
    CoinOperator::custom(dim, rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkConfig {
    pub dim: usize,
    pub coin: CoinSpec,
    /// Conjugate the coin by fresh random phases every step.
    pub dressed: bool,
    pub initial: InitialSpec,
    pub steps: usize,
    pub seed: u64,
    pub trials: usize,
    /// First step included in the σ(t) regression.
    pub t_min: usize,
    /// Refuse walks whose amplitude buffer would exceed this many bytes.
    pub memory_budget: u128,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            dim: 1,
            coin: CoinSpec::Hadamard,
            dressed: false,
            initial: InitialSpec::Standard(StandardState::AllMinus),
            steps: 100,
            seed: 0,
            trials: 400,
            t_min: 10,
            memory_budget: tolerance::DEFAULT_MEMORY_BUDGET,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| WalkError::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(WalkError::Config(format!("invalid value {value:?} for {key}"))),
    }
}

impl WalkConfig {
    /// Shorthand for a deterministic walk with a standard initial state.
    pub fn new(dim: usize, coin: CoinSpec, initial: StandardState, steps: usize) -> Self {
        WalkConfig {
            dim,
            coin,
            initial: InitialSpec::Standard(initial),
            steps,
            ..Default::default()
        }
    }

    /// Sets one field from its textual key. Keys match the CLI flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        match key.as_str() {
            "dim" | "d" => self.dim = parse_num(&key, value)?,
            "coin" => self.coin = value.parse()?,
            "dressed" => self.dressed = parse_bool(&key, value)?,
            "initial" => self.initial = value.parse()?,
            "steps" => self.steps = parse_num(&key, value)?,
            "seed" => self.seed = parse_num(&key, value)?,
            "trials" => self.trials = parse_num(&key, value)?,
            "tmin" | "t_min" => self.t_min = parse_num(&key, value)?,
            "memory_budget" => self.memory_budget = parse_num(&key, value)?,
            _ => return Err(WalkError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` document on top of `self`.
    pub fn apply_kv(&mut self, text: &str, source_name: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| WalkError::Parse {
                    source_name: source_name.to_string(),
                    line: lineno + 1,
                    msg: format!("expected key = value, got {line:?}"),
                })?;
            self.set(key, value).map_err(|e| WalkError::Parse {
                source_name: source_name.to_string(),
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_kv_file(path: &Path) -> Result<Self> {
        let mut cfg = WalkConfig::default();
        cfg.apply_kv(&fs::read_to_string(path)?, &path.display().to_string())?;
        Ok(cfg)
    }

    /// Checks every cross-field constraint; builds the coin and initial state once.
    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        self.coin.build(self.dim)?;
        self.initial.build(self.dim)?;
        if self.trials == 0 {
            return Err(WalkError::NoTrials);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "coin": self.coin.to_string(),
            "dressed": self.dressed,
            "initial": self.initial.to_string(),
            "steps": self.steps,
            "seed": self.seed,
            "trials": self.trials,
            "t_min": self.t_min,
        })
    }
}
