//! Gaussian states: constructors, the classicality test and the
//! characteristic function.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{rotation, sorted_eigenvalues};
use crate::symplectic::{require_physical, sigma, CovarianceMatrix};

/// First moments `κ` and covariance matrix `Γ` of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    kappa: DVector<f64>,
    gamma: CovarianceMatrix,
}

/// The state families used throughout the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    Vacuum { modes: usize },
    /// Thermal state with the given mean photon number per mode.
    Thermal(Vec<f64>),
    /// Single-mode squeezed vacuum, `R(θ)·diag(e^{2ζ}, e^{−2ζ})·R(θ)ᵀ`.
    Squeezed { zeta: f64, theta: f64 },
    /// Squeezed signal in the hyperbolic convention `[[cosh η, sinh η], [sinh η, cosh η]]`.
    SqueezedSignal { eta: f64 },
    /// Two-mode squeezed vacuum.
    Tmsv { zeta: f64 },
}

pub fn make_state(kind: &StateKind) -> Result<GaussianState> {
    match kind {
        StateKind::Vacuum { modes } => Ok(GaussianState::vacuum(*modes)),
        StateKind::Thermal(n) => GaussianState::thermal(n),
        StateKind::Squeezed { zeta, theta } => Ok(GaussianState::squeezed(*zeta, *theta)),
        StateKind::SqueezedSignal { eta } => Ok(GaussianState::squeezed_signal(*eta)),
        StateKind::Tmsv { zeta } => Ok(GaussianState::tmsv(*zeta)),
    }
}

impl GaussianState {
    /// Builds a state, rejecting covariance matrices that violate `Γ + iΣ ≥ 0`.
    pub fn new(kappa: DVector<f64>, gamma: CovarianceMatrix) -> Result<Self> {
        if kappa.len() != gamma.dim() {
            return Err(Error::Dimension(format!(
                "mean vector has length {}, covariance matrix is {}x{}",
                kappa.len(),
                gamma.dim(),
                gamma.dim()
            )));
        }
        require_physical(&gamma)?;
        Ok(Self { kappa, gamma })
    }

    /// Zero-mean state with the given covariance matrix.
    pub fn centered(gamma: CovarianceMatrix) -> Result<Self> {
        Self::new(DVector::zeros(gamma.dim()), gamma)
    }

    pub(crate) fn from_parts_unchecked(kappa: DVector<f64>, gamma: CovarianceMatrix) -> Self {
        Self { kappa, gamma }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self { kappa: DVector::zeros(2 * modes), gamma: CovarianceMatrix::identity(modes) }
    }

    /// `Γ_th = 2·diag(n₁, n₁, …, n_N, n_N) + 1`.
    pub fn thermal(mean_photons: &[f64]) -> Result<Self> {
        if let Some(n) = mean_photons.iter().find(|n| !(**n >= 0.0) || !n.is_finite()) {
            return Err(Error::InvalidParameter(format!("mean photon number {n} must be finite and ≥ 0")));
        }
        let diag = DVector::from_iterator(
            2 * mean_photons.len(),
            mean_photons.iter().flat_map(|n| [2.0 * n + 1.0; 2]),
        );
        Ok(Self {
            kappa: DVector::zeros(diag.len()),
            gamma: CovarianceMatrix::from_symmetric_unchecked(DMatrix::from_diagonal(&diag)),
        })
    }

    pub fn squeezed(zeta: f64, theta: f64) -> Self {
        let r = rotation(theta);
        let d = DMatrix::from_row_slice(2, 2, &[(2.0 * zeta).exp(), 0.0, 0.0, (-2.0 * zeta).exp()]);
        let g = &r * d * r.transpose();
        Self {
            kappa: DVector::zeros(2),
            gamma: CovarianceMatrix::new(g).expect("2x2 is even and square"),
        }
    }

    pub fn squeezed_signal(eta: f64) -> Self {
        let (c, s) = (eta.cosh(), eta.sinh());
        Self {
            kappa: DVector::zeros(2),
            gamma: CovarianceMatrix::from_symmetric_unchecked(DMatrix::from_row_slice(2, 2, &[c, s, s, c])),
        }
    }

    /// Two-mode squeezed vacuum with `c = cosh 2ζ`, `s = sinh 2ζ`.
    pub fn tmsv(zeta: f64) -> Self {
        let (c, s) = ((2.0 * zeta).cosh(), (2.0 * zeta).sinh());
        #[rustfmt::skip]
        let g = DMatrix::from_row_slice(4, 4, &[
              c, 0.0,   s, 0.0,
            0.0,   c, 0.0,  -s,
              s, 0.0,   c, 0.0,
            0.0,  -s, 0.0,   c,
        ]);
        Self { kappa: DVector::zeros(4), gamma: CovarianceMatrix::from_symmetric_unchecked(g) }
    }

    pub fn displaced(mut self, kappa: DVector<f64>) -> Result<Self> {
        if kappa.len() != self.kappa.len() {
            return Err(Error::Dimension(format!(
                "displacement has length {}, state has {} quadratures",
                kappa.len(),
                self.kappa.len()
            )));
        }
        self.kappa = kappa;
        Ok(self)
    }

    pub fn modes(&self) -> usize {
        self.gamma.modes()
    }

    pub fn kappa(&self) -> &DVector<f64> {
        &self.kappa
    }

    pub fn gamma(&self) -> &CovarianceMatrix {
        &self.gamma
    }

    pub fn into_parts(self) -> (DVector<f64>, CovarianceMatrix) {
        (self.kappa, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalityVerdict {
    pub classical: bool,
    pub min_gamma_eigenvalue: f64,
}

/// A Gaussian state is non-classical when an ordinary eigenvalue of its
/// covariance matrix drops below 1. Exactly 1 counts as classical.
pub fn classicality_test(gamma: &CovarianceMatrix, tol: f64) -> Result<ClassicalityVerdict> {
    require_physical(gamma)?;
    let min = sorted_eigenvalues(gamma.as_matrix()).first().copied().unwrap_or(f64::INFINITY);
    Ok(ClassicalityVerdict { classical: min >= 1.0 - tol, min_gamma_eigenvalue: min })
}

/// Largest `|ζ|` keeping a squeezed thermal state classical: `½ ln(2n + 1)`.
pub fn max_classical_squeezing(mean_photons: f64) -> Result<f64> {
    if !(mean_photons >= 0.0) || !mean_photons.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mean photon number {mean_photons} must be finite and ≥ 0"
        )));
    }
    Ok(0.5 * (2.0 * mean_photons + 1.0).ln())
}

/// `χ(λ) = exp(−¼ λᵀΓλ + i λᵀΣκ)`.
pub fn characteristic_function(state: &GaussianState, lambda: &[f64]) -> Result<Complex64> {
    if lambda.len() != state.kappa.len() {
        return Err(Error::Dimension(format!(
            "λ has length {}, state has {} quadratures",
            lambda.len(),
            state.kappa.len()
        )));
    }
    let l = DVector::from_column_slice(lambda);
    let quad = l.dot(&(state.gamma.as_matrix() * &l));
    let phase = l.dot(&(sigma(state.modes()) * &state.kappa));
    Ok(Complex64::new(-0.25 * quad, phase).exp())
}
