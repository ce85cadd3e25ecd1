use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("truncation weight {weight:e} exceeds the budget {budget:e}")]
    TruncationBudget { weight: f64, budget: f64 },

    #[error("quadrature grid too coarse: probabilities integrate to {integral} instead of {expected}")]
    GridTooCoarse { integral: f64, expected: f64 },
}

pub type Result<T, E = FockError> = std::result::Result<T, E>;
