use thiserror::Error;

/// Everything that can go wrong while building or running a walk.
#[derive(Debug, Error)]
pub enum WalkError {
    #[error("dimension {0} out of range (supported: 1..={max})", max = crate::MAX_DIM)]
    Dimension(usize),

    #[error("expected {expected} internal amplitudes, got {got}")]
    InternalLength { expected: usize, got: usize },

    #[error("internal state not normalized: norm = {0}")]
    NotNormalized(f64),

    #[error("the singlet state is only defined for d = 2 (got d = {0})")]
    SingletDimension(usize),

    #[error("coin has dimension {coin} but state has dimension {state}")]
    DimensionMismatch { coin: usize, state: usize },

    #[error("matrix must be {expected}x{expected}, got {rows} rows with {cols} columns")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not unitary: |C^†C - I| = {deviation:e} at ({row}, {col})")]
    NotUnitary {
        deviation: f64,
        row: usize,
        col: usize,
    },

    #[error("expected {expected} phases, got {got}")]
    PhaseCount { expected: usize, got: usize },

    #[error("walk needs {required} bytes of amplitude storage, budget is {budget}")]
    MemoryBudget { required: u128, budget: u128 },

    #[error("path-sum enumeration needs d*steps <= {max}, got {got}")]
    PathBudget { got: usize, max: usize },

    #[error("regression needs at least {needed} samples with t >= {t_min}, got {got}")]
    TooFewPoints {
        needed: usize,
        got: usize,
        t_min: usize,
    },

    #[error("axis {axis} out of range for dimension {dim}")]
    Axis { axis: usize, dim: usize },

    #[error("dressed mode required")]
    NotDressed,

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("config: {0}")]
    Config(String),

    #[error("parse error in {source_name}, line {line}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl WalkError {
    /// True for refusals caused by size limits rather than bad input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(
            self,
            WalkError::MemoryBudget { .. } | WalkError::PathBudget { .. }
        )
    }
}

pub type Result<T, E = WalkError> = std::result::Result<T, E>;
