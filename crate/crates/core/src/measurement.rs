//! Conditional states after Gaussian and homodyne measurements.
//!
//! Homodyne outcomes follow the labelling used for the teleportation
//! protocol: the reduction keeps the quadrature *conjugate* to the one named
//! as measured, and the outcome value is the value of that kept coordinate.
//! Measuring `x` on mode `k` therefore conditions on `p_k`.
//! Outcomes are in quadrature units, so a vacuum outcome has density
//! `e^{−X²}/√π`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{ensure_even_square, max_abs, symmetrize};
use crate::states::GaussianState;
use crate::symplectic::{require_physical, CovarianceMatrix};

/// Relative eigenvalue cutoff used by [`mp_inverse`] inside this module.
pub const MP_TOL: f64 = 1e-12;

/// `Γ = [[C₁, C₃], [C₃ᵀ, C₂]]` split into kept (`C₁`) and measured (`C₂`) parts.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockedCovariance {
    pub c1: DMatrix<f64>,
    pub c2: DMatrix<f64>,
    pub c3: DMatrix<f64>,
}

impl BlockedCovariance {
    pub fn new(c1: DMatrix<f64>, c2: DMatrix<f64>, c3: DMatrix<f64>) -> Result<Self> {
        let n = ensure_even_square(&c1, "C1")?;
        let m = ensure_even_square(&c2, "C2")?;
        if c3.shape() != (2 * n, 2 * m) {
            return Err(Error::Dimension(format!(
                "C3 must be {}x{}, got {}x{}",
                2 * n,
                2 * m,
                c3.nrows(),
                c3.ncols()
            )));
        }
        let b = Self { c1, c2, c3 };
        require_physical(&b.assembled()?)?;
        Ok(b)
    }

    /// Splits `gamma` so that the listed modes form the measured block.
    pub fn from_covariance(gamma: &CovarianceMatrix, measured: &[usize]) -> Result<Self> {
        let modes = gamma.modes();
        let mut is_measured = vec![false; modes];
        for &k in measured {
            if k >= modes {
                return Err(Error::ModeOutOfRange { index: k, modes });
            }
            if is_measured[k] {
                return Err(Error::InvalidParameter(format!("mode {k} listed twice")));
            }
            is_measured[k] = true;
        }
        let kept: Vec<usize> = (0..modes).filter(|&k| !is_measured[k]).flat_map(|k| [2 * k, 2 * k + 1]).collect();
        let meas: Vec<usize> = measured.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let g = gamma.as_matrix();
        let b = Self {
            c1: submatrix(g, &kept, &kept),
            c2: submatrix(g, &meas, &meas),
            c3: submatrix(g, &kept, &meas),
        };
        require_physical(gamma)?;
        Ok(b)
    }

    pub fn assembled(&self) -> Result<CovarianceMatrix> {
        let (n, m) = (self.c1.nrows(), self.c2.nrows());
        let mut g = DMatrix::zeros(n + m, n + m);
        g.view_mut((0, 0), (n, n)).copy_from(&self.c1);
        g.view_mut((n, n), (m, m)).copy_from(&self.c2);
        g.view_mut((0, n), (n, m)).copy_from(&self.c3);
        g.view_mut((n, 0), (m, n)).copy_from(&self.c3.transpose());
        CovarianceMatrix::new(g)
    }
}

/// Outcome of a Gaussian measurement on part of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalResult {
    /// Covariance matrix of the unmeasured modes. Never depends on the outcome.
    pub gamma_out: CovarianceMatrix,
    /// `[det(C₂ + D²)]^{−1/2}` for [`gaussian_project`] (unnormalized, pseudo-determinant
    /// when singular); the density at the origin for [`homodyne_project`].
    pub prob_factor: f64,
    /// Linear map from outcomes to conditional displacement, in the `λ = ξ/√2` scaling.
    /// The displacement in quadrature units is `√2 · mean_map · outcome`.
    pub mean_map: DMatrix<f64>,
}

impl ConditionalResult {
    /// Conditional mean of the unmeasured modes in quadrature units.
    pub fn conditional_mean(&self, outcome: &DVector<f64>) -> DVector<f64> {
        &self.mean_map * outcome * std::f64::consts::SQRT_2
    }
}

/// Moore–Penrose inverse of a symmetric matrix via its spectral decomposition.
///
/// Eigenvalues with `|e| ≤ tol · max|e|` are treated as zero.
pub fn mp_inverse(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = m.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let cut = tol * eig.eigenvalues.amax();
    let inv = eig.eigenvalues.map(|e| if e.abs() > cut && e != 0.0 { 1.0 / e } else { 0.0 });
    &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose()
}

/// Product of the eigenvalues that [`mp_inverse`] would keep (1 for the zero matrix).
pub fn pseudo_determinant(m: &DMatrix<f64>, tol: f64) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let cut = tol * eig.eigenvalues.amax();
    eig.eigenvalues.iter().filter(|e| e.abs() > cut && **e != 0.0).product()
}

/// Projection of the measured block onto a Gaussian reference with noise `D²`.
///
/// `d` holds the diagonal of `D`. With `d = (1/δ, δ)` per mode and `δ → 0`
/// this tends to [`homodyne_project`] measuring `x`.
/// A singular `C₂ + D²` is handled with the Moore–Penrose inverse and pseudo-determinant.
pub fn gaussian_project(blocks: &BlockedCovariance, d: &DVector<f64>) -> Result<ConditionalResult> {
    let m = blocks.c2.nrows();
    if d.len() != m {
        return Err(Error::Dimension(format!("D has {} diagonal entries, C2 is {m}x{m}", d.len())));
    }
    if d.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter("D must be a finite non-negative diagonal".into()));
    }
    require_physical(&blocks.assembled()?)?;
    let m2 = &blocks.c2 + DMatrix::from_diagonal(&d.map(|v| v * v));
    // Cholesky keeps the soft directions accurate when D spans many orders of magnitude
    let (inv, det) = match m2.clone().cholesky() {
        Some(ch) if ch.l().diagonal().iter().all(|v| *v > 0.0) => {
            let det = ch.l().diagonal().iter().map(|v| v * v).product::<f64>();
            (ch.inverse(), det)
        }
        _ => (mp_inverse(&m2, MP_TOL), pseudo_determinant(&m2, MP_TOL)),
    };
    let gamma_out = symmetrize(&(&blocks.c1 - &blocks.c3 * &inv * blocks.c3.transpose()));
    Ok(ConditionalResult {
        gamma_out: CovarianceMatrix::from_symmetric_unchecked(gamma_out),
        prob_factor: det.powf(-0.5),
        mean_map: &blocks.c3 * &inv * std::f64::consts::FRAC_1_SQRT_2,
    })
}

/// Quadrature named as measured on a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    /// Phase-space index of the coordinate kept in the reduction.
    fn kept_index(self, mode: usize) -> usize {
        match self {
            Quadrature::X => 2 * mode + 1,
            Quadrature::P => 2 * mode,
        }
    }
}

/// Homodyne reduction together with its outcome density.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneResult {
    pub conditional: ConditionalResult,
    /// Kept phase-space indices, in the order of the outcome vector.
    pub kept: Vec<usize>,
    /// Block `K` of `Γ` on the kept indices. Outcomes are distributed as `N(0, K/2)`.
    pub outcome_covariance: DMatrix<f64>,
}

impl HomodyneResult {
    /// `p(v) = exp(−vᵀK⁺v) / (π^{m/2} √pdet K)`.
    pub fn density(&self, outcome: &DVector<f64>) -> Result<f64> {
        if outcome.len() != self.kept.len() {
            return Err(Error::Dimension(format!(
                "outcome has {} entries, {} quadratures were measured",
                outcome.len(),
                self.kept.len()
            )));
        }
        let kinv = mp_inverse(&self.outcome_covariance, MP_TOL);
        Ok(self.conditional.prob_factor * (-(outcome.transpose() * kinv * outcome)[(0, 0)]).exp())
    }
}

/// Homodyne measurement of one quadrature on each listed mode.
pub fn homodyne_project(gamma: &CovarianceMatrix, measured: &[(usize, Quadrature)]) -> Result<HomodyneResult> {
    require_physical(gamma)?;
    let modes = gamma.modes();
    let mut seen = vec![false; modes];
    for &(k, _) in measured {
        if k >= modes {
            return Err(Error::ModeOutOfRange { index: k, modes });
        }
        if seen[k] {
            return Err(Error::InvalidParameter(format!(
                "mode {k} measured twice; only one quadrature per mode is allowed"
            )));
        }
        seen[k] = true;
    }
    let kept: Vec<usize> = measured.iter().map(|&(k, q)| q.kept_index(k)).collect();
    let rest: Vec<usize> = (0..modes).filter(|&k| !seen[k]).flat_map(|k| [2 * k, 2 * k + 1]).collect();
    let g = gamma.as_matrix();
    let k = submatrix(g, &kept, &kept);
    let n = submatrix(g, &kept, &rest);
    let b = submatrix(g, &rest, &rest);
    let kinv = mp_inverse(&k, MP_TOL);
    let gamma_out = symmetrize(&(&b - n.transpose() * &kinv * &n));
    let norm = PI.powf(kept.len() as f64 / 2.0) * pseudo_determinant(&k, MP_TOL).sqrt();
    Ok(HomodyneResult {
        conditional: ConditionalResult {
            gamma_out: CovarianceMatrix::from_symmetric_unchecked(gamma_out),
            prob_factor: 1.0 / norm,
            mean_map: n.transpose() * kinv * std::f64::consts::FRAC_1_SQRT_2,
        },
        kept,
        outcome_covariance: k,
    })
}

/// Conditions `state` on a homodyne `outcome`, returning the post-measurement
/// state of the unmeasured modes and the outcome density.
pub fn homodyne_condition(
    state: &GaussianState,
    measured: &[(usize, Quadrature)],
    outcome: &DVector<f64>,
) -> Result<(GaussianState, f64)> {
    let res = homodyne_project(state.gamma(), measured)?;
    let kappa = state.kappa();
    let offset = DVector::from_iterator(res.kept.len(), res.kept.iter().zip(outcome.iter()).map(|(&i, v)| v - kappa[i]));
    let density = res.density(&offset)?;
    let mut seen = vec![false; state.modes()];
    measured.iter().for_each(|&(k, _)| seen[k] = true);
    let rest: Vec<usize> = (0..state.modes()).filter(|&k| !seen[k]).flat_map(|k| [2 * k, 2 * k + 1]).collect();
    let base = DVector::from_iterator(rest.len(), rest.iter().map(|&i| kappa[i]));
    let mean = base + res.conditional.conditional_mean(&offset);
    Ok((GaussianState::from_parts_unchecked(mean, res.conditional.gamma_out), density))
}

fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
}

/// Largest violation of the four Penrose identities for `pinv` as the pseudo-inverse of `m`.
pub fn penrose_residual(m: &DMatrix<f64>, pinv: &DMatrix<f64>) -> f64 {
    let a = m * pinv;
    let b = pinv * m;
    [
        max_abs(&(&a * m - m)),
        max_abs(&(&b * pinv - pinv)),
        max_abs(&(&a - a.transpose())),
        max_abs(&(&b - b.transpose())),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
