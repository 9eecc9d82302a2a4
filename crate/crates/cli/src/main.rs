use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk::io::{cmd_ensemble, cmd_oracle_check, cmd_run, cmd_sweep};
use qwalk::{WalkConfig, WalkError};

/// Discrete-time quantum walks on the d-dimensional lattice.
#[derive(Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one walk and write its final distribution.
    Run(Walk),
    /// Record sigma(t) and fit its slope.
    Sweep(Walk),
    /// Average dressed walks and compare with the classical binomial law.
    Ensemble(Walk),
    /// Compare the engine with brute-force path summation (d * steps <= 12).
    OracleCheck(Walk),
}

#[derive(Args)]
struct Walk {
    /// Flat `key = value` file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, short)]
    dim: Option<String>,
    /// hadamard, dft, grover or custom:<path>
    #[arg(long)]
    coin: Option<String>,
    /// Conjugate the coin by random phases every step.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    dressed: Option<String>,
    /// all_minus, all_plus, symmetric_product, singlet, or comma-separated amplitudes
    #[arg(long, allow_hyphen_values = true)]
    initial: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    tmin: Option<String>,
    /// Largest amplitude buffer to allocate, in bytes.
    #[arg(long)]
    memory_budget: Option<String>,
    #[arg(long, short, default_value = ".")]
    out_dir: PathBuf,
}

impl Walk {
    fn config(&self) -> qwalk::Result<WalkConfig> {
        let mut cfg = match &self.config {
            Some(path) => WalkConfig::from_kv_file(path)?,
            None => WalkConfig::default(),
        };
        let flags = [
            ("dim", &self.dim),
            ("coin", &self.coin),
            ("dressed", &self.dressed),
            ("initial", &self.initial),
            ("steps", &self.steps),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("tmin", &self.tmin),
            ("memory_budget", &self.memory_budget),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(err: &WalkError) -> u8 {
    match err {
        e if e.is_resource_bound() => 3,
        WalkError::Io(_) | WalkError::Json(_) => 1,
        _ => 2,
    }
}

fn execute(command: &Command) -> qwalk::Result<bool> {
    match command {
        Command::Run(w) => {
            let report = cmd_run(&w.config()?, &w.out_dir)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Sweep(w) => {
            let report = cmd_sweep(&w.config()?, &w.out_dir)?;
            println!("{}", serde_json::to_string_pretty(&report.regression)?);
        }
        Command::Ensemble(w) => {
            let report = cmd_ensemble(&w.config()?, &w.out_dir)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::OracleCheck(w) => {
            let report = cmd_oracle_check(&w.config()?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            return Ok(report.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("qwalk: oracle deviation above tolerance");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
