//! Discrete-time quantum walks on the integer lattice Z^d.
//!
//! A walker carries a `2^d`-dimensional internal "coin" state. Each step
//! applies a unitary coin to that state at every site, then moves every
//! component one unit along each axis, forward or backward according to the
//! matching internal qubit. The crate provides
//!
//! * the coins: tensor Hadamard, discrete Fourier transform, Grover diffusion,
//!   random-phase dressing, and validated user matrices ([`coin`]);
//! * a dense, parity-reduced state vector and the step itself ([`lattice`], [`evolve`]);
//! * distributions, spread and the σ(t) regression ([`stats`]);
//! * the binomial law, ensemble averaging of dressed walks, and a brute-force
//!   path-sum oracle ([`classical`]);
//! * configuration and file output used by the `qwalk` binary ([`config`], [`io`]).
//!
//! ```
//! use qwalk::{stats, CoinSpec, StandardState, WalkConfig};
//!
//! // 1-D Hadamard walk from |->, 100 steps
//! let config = WalkConfig::new(1, CoinSpec::Hadamard, StandardState::AllMinus, 100);
//! let series = stats::sigma_series(&config)?;
//! let fit = stats::regress_sigma(&series, 10)?;
//! assert!((fit.slope - 0.4544).abs() < 0.005);
//! # Ok::<(), qwalk::WalkError>(())
//! ```

pub mod classical;
pub mod coin;
pub mod config;
pub mod error;
pub mod evolve;
pub mod io;
pub mod lattice;
pub mod stats;
pub mod tolerance;

pub use coin::CoinOperator;
pub use config::{CoinSpec, InitialSpec, WalkConfig};
pub use error::{Result, WalkError};
pub use lattice::{CoinIndex, InternalState, LatticePoint, StandardState, WalkState};
pub use stats::{Distribution, RegressionResult, SigmaSeries};

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 4;
