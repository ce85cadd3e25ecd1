//! Brute-force truncated Fock-space oracle for Gaussian covariance-matrix results.
//!
//! States live in the product basis `|n₀ n₁ …⟩` with `0 ≤ nₖ ≤ cutoff`; the
//! index of a basis state is `Σ nₖ·d^{M−1−k}` with `d = cutoff + 1`.
//! Quadratures are `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, so the vacuum
//! has `⟨x²⟩ = ½` and covariance matrix `1`.
//!
//! This crate shares no code with the Gaussian library it checks.

pub mod error;
pub mod homodyne;
pub mod loss;
pub mod negativity;
pub mod state;
pub mod teleport;

pub use error::{FockError, Result};
pub use homodyne::{conditional_state, homodyne_povm_fock, HomodyneDistribution, QuadratureTable};
pub use loss::apply_loss_fock;
pub use negativity::{log_negativity_fock, FockNegativity, LogBase};
pub use state::{
    build_tmsv_fock, covariance_from_fock, overlap_fock, squeezed_vacuum_ket, thermal_fock, vacuum_probability, FockKet,
    FockState, Moments,
};
pub use teleport::{TeleportOracle, TeleportOutcome};

/// Cutoff used by the acceptance checks.
pub const DEFAULT_CUTOFF: usize = 25;
