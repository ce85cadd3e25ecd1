//! Gaussian continuous-variable states on covariance matrices.
//!
//! Quadratures are ordered `(x₁, p₁, x₂, p₂, …)`, the vacuum has `Γ = 1`
//! and the symplectic form is `Σ = ⊕ [[0, 1], [−1, 0]]`.
//!
//! ```
//! use gaussq::entanglement::{log_negativity, LogBase};
//! use gaussq::states::GaussianState;
//!
//! let tmsv = GaussianState::tmsv(0.5);
//! let report = log_negativity(tmsv.gamma(), LogBase::Natural).unwrap();
//! assert!((report.e_n - 1.0).abs() < 1e-12);
//! ```

mod linalg;

pub mod channels;
pub mod entanglement;
pub mod error;
pub mod measurement;
pub mod states;
pub mod symplectic;
pub mod teleportation;

pub use error::{Error, Result};
pub use states::GaussianState;
pub use symplectic::{CovarianceMatrix, SymplecticMatrix};

/// Default absolute tolerance for physicality and symplecticity checks.
pub const DEFAULT_TOL: f64 = 1e-9;
