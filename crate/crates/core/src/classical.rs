//! Classical reference laws and independent checks of the quantum engine.
//!
//! * [`binomial_distribution`]: the exact fair ±1 walk on each axis.
//! * [`ensemble_average`]: mean distribution of many phase-randomized walks,
//!   which loses its interference pattern and approaches the binomial law.
//! * [`path_sum_oracle`]: amplitudes by brute-force enumeration of every
//!   coin-outcome history. Exponential, but shares no code with `evolve`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::config::WalkConfig;
use crate::error::{Result, WalkError};
use crate::evolve::{self, trial_rng};
use crate::lattice::{CoinIndex, LatticePoint, WalkState};
use crate::stats::Distribution;
use crate::tolerance;

/// `C(t, k) / 2^t` from exact integers.
fn binomial_mass(t: u64, k: u64) -> f64 {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (t - i) / (i + 1);
    }
    // keep the top 64 bits and rescale, so huge t does not overflow f64 midway
    let bits = c.bits();
    let drop = bits.saturating_sub(64);
    let mantissa = (c >> drop).to_u64().unwrap_or(u64::MAX) as f64;
    mantissa * 2f64.powi(drop as i32 - t as i32)
}

/// 1-D law of `t` fair ±1 steps, as `(x, P(x))` for `x = -t, -t+2, ..., t`.
fn binomial_1d(t: usize) -> Vec<(i64, f64)> {
    let raw: Vec<(i64, f64)> = (0..=t as u64)
        .map(|k| (2 * k as i64 - t as i64, binomial_mass(t as u64, k)))
        .collect();
    let total: f64 = raw.iter().map(|p| p.1).sum();
    raw.into_iter().map(|(x, m)| (x, m / total)).collect()
}

/// Product over `dim` axes of the fair `t`-step binomial walk.
pub fn binomial_distribution(dim: usize, t: usize) -> Distribution {
    let axis = binomial_1d(t);
    let mut points: Vec<(Vec<i64>, f64)> = vec![(Vec::with_capacity(dim), 1.0)];
    for _ in 0..dim {
        points = points
            .into_iter()
            .flat_map(|(coords, m)| {
                axis.iter().map(move |&(x, p)| {
                    let mut c = coords.clone();
                    c.push(x);
                    (c, m * p)
                })
            })
            .collect();
    }
    Distribution::from_masses(dim, points.into_iter().map(|(c, m)| (LatticePoint(c), m)))
        .expect("binomial masses are finite and non-negative")
}

/// Trials evaluated concurrently before their masses are folded into the sum.
const ENSEMBLE_BATCH: usize = 64;

/// Mean position distribution of `trials` dressed walks.
///
/// Trial `k` draws from `trial_rng(master_seed, k)`, and partial sums are
/// folded in trial order, so the result does not depend on thread scheduling.
pub fn ensemble_average(config: &WalkConfig, trials: usize, master_seed: u64) -> Result<Distribution> {
    if !config.dressed {
        return Err(WalkError::NotDressed);
    }
    if trials == 0 {
        return Err(WalkError::NoTrials);
    }
    let mut sum: Vec<f64> = Vec::new();
    let mut points: Vec<LatticePoint> = Vec::new();
    for start in (0..trials).step_by(ENSEMBLE_BATCH) {
        let end = (start + ENSEMBLE_BATCH).min(trials);
        let batch: Vec<WalkState> = (start..end)
            .into_par_iter()
            .map(|k| evolve::run_dressed(config, &mut trial_rng(master_seed, k as u64)))
            .collect::<Result<_>>()?;
        for state in &batch {
            let masses = state.active_masses();
            if sum.is_empty() {
                sum = vec![0.0; masses.len()];
                points = state.sites().map(|(p, _)| p).collect();
            }
            for (s, m) in sum.iter_mut().zip(masses) {
                *s += m;
            }
        }
    }
    let n = trials as f64;
    Distribution::from_masses(
        config.dim,
        points
            .into_iter()
            .zip(sum)
            .filter(|(_, m)| *m > 0.0)
            .map(|(p, m)| (p, m / n)),
    )
}

/// Amplitudes of the configured walk by explicit summation over all
/// `2^(d·steps)` coin-index histories.
///
/// Each history `mu_1, ..., mu_t` contributes
/// `ψ_0(mu_0) · Π_k C[mu_k][mu_{k-1}]` at `(Σ_k v(mu_k), mu_t)`.
pub fn path_sum_oracle(config: &WalkConfig) -> Result<WalkState> {
    let dim = config.dim;
    let exponent = dim * config.steps;
    if exponent > tolerance::MAX_PATH_EXPONENT {
        return Err(WalkError::PathBudget {
            got: exponent,
            max: tolerance::MAX_PATH_EXPONENT,
        });
    }
    let coin = config.coin.build(dim)?;
    let initial = config.initial.build(dim)?;
    let n = 1usize << dim;
    let moves: Vec<Vec<i64>> = (0..n).map(|mu| CoinIndex(mu).displacement(dim)).collect();

    struct Paths<'a> {
        coin: &'a crate::coin::CoinOperator,
        moves: &'a [Vec<i64>],
        steps: usize,
        acc: HashMap<(Vec<i64>, usize), Complex64>,
    }

    impl Paths<'_> {
        fn extend(&mut self, depth: usize, prev: usize, amp: Complex64, pos: &mut Vec<i64>) {
            if depth == self.steps {
                *self
                    .acc
                    .entry((pos.clone(), prev))
                    .or_insert(Complex64::new(0.0, 0.0)) += amp;
                return;
            }
            for next in 0..self.moves.len() {
                let c = self.coin.entry(next, prev);
                for (x, dx) in pos.iter_mut().zip(&self.moves[next]) {
                    *x += dx;
                }
                self.extend(depth + 1, next, amp * c, pos);
                for (x, dx) in pos.iter_mut().zip(&self.moves[next]) {
                    *x -= dx;
                }
            }
        }
    }

    let mut paths = Paths {
        coin: &coin,
        moves: &moves,
        steps: config.steps,
        acc: HashMap::new(),
    };
    for (mu0, &a0) in initial.amplitudes().iter().enumerate() {
        if a0 != Complex64::new(0.0, 0.0) {
            paths.extend(0, mu0, a0, &mut vec![0; dim]);
        }
    }
    WalkState::from_amplitudes(
        dim,
        config.steps,
        paths
            .acc
            .into_iter()
            .map(|((pos, mu), a)| (LatticePoint(pos), mu, a)),
    )
}

/// Largest per-amplitude gap between the oracle and state-vector evolution.
pub fn oracle_deviation(config: &WalkConfig) -> Result<f64> {
    let oracle = path_sum_oracle(config)?;
    let mut deterministic = config.clone();
    deterministic.dressed = false;
    let evolved = evolve::run(&deterministic, |_, _| {})?;
    Ok(oracle.max_amplitude_deviation(&evolved))
}
