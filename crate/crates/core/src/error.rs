use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resonant orbit: eigenvalues {0} and {1} differ by a nonzero integer")]
    Resonant(String, String),

    #[error("partition weights differ ({0} vs {1})")]
    WeightMismatch(usize, usize),

    #[error("quiver has a loop at vertex {0}")]
    QuiverLoop(String),

    #[error("truncation order {have} is too small, at least {need} required")]
    InsufficientTruncation { need: i64, have: i64 },

    #[error("eigenvalues are not Gaussian rationals")]
    EigenvaluesOutsideField,

    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(usize),

    #[error("reflection bound of {0} steps exceeded while classifying a root")]
    HeightBoundExceeded(usize),

    #[error("singular linear system")]
    Singular,
}

impl DsError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        DsError::InvalidInput(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        DsError::Precondition(msg.into())
    }

    /// Inconclusive outcomes as opposed to bad input.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            DsError::BudgetExceeded(_) | DsError::HeightBoundExceeded(_)
        )
    }
}

pub type Result<T, E = DsError> = std::result::Result<T, E>;
