//! Numerical tolerances shared by the library and its tests.

/// Internal states passed to constructors must have unit norm within this.
pub const INPUT_NORM: f64 = 1e-9;

/// Named internal states are normalized to this precision.
pub const INTERNAL_NORM: f64 = 1e-12;

/// Allowed total-norm drift of an evolved walk state.
pub const STATE_NORM: f64 = 1e-10;

/// Built-in coins satisfy `max |C^†C - I| <= COIN_UNITARITY`.
pub const COIN_UNITARITY: f64 = 1e-12;

/// User-supplied coins are rejected above this unitarity defect.
pub const CUSTOM_UNITARITY: f64 = 1e-9;

/// Agreement between the path-sum oracle and state-vector evolution, per amplitude.
pub const ORACLE_AMPLITUDE: f64 = 1e-10;

/// Probability columns of emitted CSV files sum to one within this.
pub const CSV_MASS: f64 = 1e-9;

/// Default ceiling on amplitude storage for a single walk (bytes).
pub const DEFAULT_MEMORY_BUDGET: u128 = 1 << 30;

/// Largest `d * steps` accepted by the path-sum oracle.
pub const MAX_PATH_EXPONENT: usize = 12;
