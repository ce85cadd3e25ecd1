use thiserror::Error;

/// Errors raised by the covariance-matrix calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not symplectic (max deviation {deviation:e})")]
    NotSymplectic { deviation: f64 },

    #[error("covariance matrix violates the uncertainty relation (min eigenvalue of Γ + iΣ = {min_eigenvalue:e})")]
    Unphysical { min_eigenvalue: f64 },

    #[error("channel is not completely positive (min eigenvalue of G + iΣ − iAΣAᵀ = {min_eigenvalue:e})")]
    InvalidChannel { min_eigenvalue: f64 },

    #[error("mode index {index} out of range for {modes} mode(s)")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("separability verdicts disagree: criterion margin {criterion_margin:e}, partial-transpose margin {pt_margin:e}")]
    InconsistentVerdict { criterion_margin: f64, pt_margin: f64 },

    #[error("negative discriminant {0:e} in the log-negativity closed form")]
    NegativeDiscriminant(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
