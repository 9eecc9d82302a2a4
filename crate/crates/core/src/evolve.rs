//! One walk step is a coin on every site followed by the conditional shift.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coin::CoinOperator;
use crate::config::WalkConfig;
use crate::error::{Result, WalkError};
use crate::lattice::{storage_bytes, WalkState};

/// Recorded in output metadata so dressed runs can be reproduced.
pub const RNG_DESCRIPTION: &str =
    "ChaCha8Rng (rand_chacha 0.9): seed_from_u64(master_seed), set_stream(trial_index); beta = 2*pi*U[0,1)";

/// Random stream for trial `trial` of an ensemble seeded with `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Applies `coin` to the internal amplitudes of every site.
pub fn apply_coin(state: &mut WalkState, coin: &CoinOperator) -> Result<()> {
    if coin.dim() != state.dim() {
        return Err(WalkError::DimensionMismatch {
            coin: coin.dim(),
            state: state.dim(),
        });
    }
    let n = state.coin_dim();
    let dim = state.dim();
    let side = state.side();
    let span = state.steps() + 1;
    // one chunk per row along the last axis; rows outside the active box are all zero
    state
        .raw_mut()
        .par_chunks_mut(side * n)
        .enumerate()
        .for_each_init(
            || vec![Complex64::new(0.0, 0.0); n],
            |scratch, (row, chunk)| {
                let mut r = row;
                for _ in 0..dim - 1 {
                    if r % side >= span {
                        return;
                    }
                    r /= side;
                }
                for site in chunk[..span * n].chunks_exact_mut(n) {
                    coin.apply_to(site, scratch);
                }
            },
        );
    Ok(())
}

/// Moves `ψ(x, mu)` to `ψ(x + v(mu), mu)` and advances the clock.
pub fn apply_shift(state: &mut WalkState) {
    if state.steps() == state.capacity() {
        let grow = state.capacity().max(8);
        state.reserve_steps(grow + 1);
    }
    let n = state.coin_dim();
    let dim = state.dim();
    // a `+` component advances one reduced index along its axis, a `-` component stays put
    let offsets: Vec<usize> = (0..n)
        .map(|mu| {
            (0..dim)
                .filter(|&axis| (mu >> (dim - 1 - axis)) & 1 == 0)
                .map(|axis| state.stride(axis) * n)
                .sum()
        })
        .collect();
    let span = state.steps() + 1;
    let rows = state.active_rows();
    let amps = state.raw_mut();
    // Destinations lie at higher offsets, so walking sites backwards never
    // overwrites an amplitude that has not been moved yet.
    for &row in rows.iter().rev() {
        for site in (row..row + span).rev() {
            let base = site * n;
            for (mu, &off) in offsets.iter().enumerate() {
                if off == 0 {
                    continue;
                }
                let a = std::mem::replace(&mut amps[base + mu], Complex64::new(0.0, 0.0));
                amps[base + mu + off] = a;
            }
        }
    }
    state.advance_clock();
}

pub fn step(state: &mut WalkState, coin: &CoinOperator) -> Result<()> {
    apply_coin(state, coin)?;
    apply_shift(state);
    Ok(())
}

fn check_budget(config: &WalkConfig) -> Result<()> {
    let required = storage_bytes(config.dim, config.steps);
    if required > config.memory_budget {
        return Err(WalkError::MemoryBudget {
            required,
            budget: config.memory_budget,
        });
    }
    Ok(())
}

fn initial_state(config: &WalkConfig) -> Result<WalkState> {
    check_budget(config)?;
    let internal = config.initial.build(config.dim)?;
    WalkState::with_capacity(config.dim, &internal, config.steps)
}

/// Runs `config.steps` steps, calling `observer(t, state)` after each one.
///
/// Dressed configurations draw their phases from `trial_rng(config.seed, 0)`.
pub fn run<F>(config: &WalkConfig, observer: F) -> Result<WalkState>
where
    F: FnMut(usize, &WalkState),
{
    if config.dressed {
        let mut rng = trial_rng(config.seed, 0);
        return run_dressed_with(config, &mut rng, observer);
    }
    let coin = config.coin.build(config.dim)?;
    let mut state = initial_state(config)?;
    evolve(&mut state, &coin, config.steps, observer)?;
    Ok(state)
}

/// Advances an existing state by `steps` steps of a fixed coin.
pub fn evolve<F>(state: &mut WalkState, coin: &CoinOperator, steps: usize, mut observer: F) -> Result<()>
where
    F: FnMut(usize, &WalkState),
{
    state.reserve_steps(steps);
    for _ in 0..steps {
        step(state, coin)?;
        observer(state.steps(), state);
    }
    Ok(())
}

/// Runs with a freshly dressed coin each step; phases come from `rng`.
pub fn run_dressed<R: RngCore>(config: &WalkConfig, rng: &mut R) -> Result<WalkState> {
    run_dressed_with(config, rng, |_, _| {})
}

pub fn run_dressed_with<R, F>(config: &WalkConfig, rng: &mut R, mut observer: F) -> Result<WalkState>
where
    R: RngCore,
    F: FnMut(usize, &WalkState),
{
    let base = config.coin.build(config.dim)?;
    let mut state = initial_state(config)?;
    let mut betas = vec![0.0; config.dim];
    for _ in 0..config.steps {
        for b in betas.iter_mut() {
            *b = TAU * rng.random::<f64>();
        }
        step(&mut state, &base.dressed(&betas)?)?;
        observer(state.steps(), &state);
    }
    Ok(state)
}
