//! Continuous-variable teleportation through two lossy fibers.
//!
//! Mode 0 carries the signal, modes 1 and 2 the fiber-degraded TMSV.
//! Modes 0 and 1 are mixed at a symmetric beamsplitter, after which `x₀`
//! and `p₁` are measured. Outcomes are ordered `(X_{x₀}, −X_{p₁})`; in the
//! reduction these are the values of the coordinates `p₀` and `x₁`
//! (see [`crate::measurement`]).

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::{degraded_tmsv, FiberParams, TmsvCoefficients};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, rotation, symmetrize};
use crate::measurement::{homodyne_project, Quadrature};
use crate::symplectic::{require_physical, sigma, CovarianceMatrix, Gate};

/// Signal covariance `[[x, z], [z, y]]`, resource squeezing and the two fibers.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportSetup {
    pub gamma_in: CovarianceMatrix,
    pub zeta: f64,
    /// Fiber from the source to the sender.
    pub f1: FiberParams,
    /// Fiber from the source to the receiver.
    pub f2: FiberParams,
}

impl TeleportSetup {
    pub fn new(gamma_in: CovarianceMatrix, zeta: f64, f1: FiberParams, f2: FiberParams) -> Result<Self> {
        let s = Self { gamma_in, zeta, f1, f2 };
        s.validate()?;
        Ok(s)
    }

    /// Ideal fibers on both arms.
    pub fn ideal(gamma_in: CovarianceMatrix, zeta: f64) -> Result<Self> {
        Self::new(gamma_in, zeta, FiberParams::ideal(), FiberParams::ideal())
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma_in.dim() != 2 {
            return Err(Error::Dimension(format!(
                "signal must be single-mode, got {}x{}",
                self.gamma_in.dim(),
                self.gamma_in.dim()
            )));
        }
        require_physical(&self.gamma_in)?;
        if !self.zeta.is_finite() {
            return Err(Error::InvalidParameter(format!("squeezing ζ = {} is not finite", self.zeta)));
        }
        self.f1.validate()?;
        self.f2.validate()
    }

    pub fn coefficients(&self) -> TmsvCoefficients {
        TmsvCoefficients::new(self.zeta, &self.f1, &self.f2)
    }

    /// `Γ₀₁₂ = (S_BS ⊕ 1)(Γ_in ⊕ Γ_dec)(S_BS ⊕ 1)ᵀ`.
    pub fn tripartite_covariance(&self) -> Result<CovarianceMatrix> {
        let dec = degraded_tmsv(self.zeta, &self.f1, &self.f2)?;
        let total = self.gamma_in.direct_sum(&dec);
        let s = Gate::BeamSplitter { first: 0, second: 1 }.matrix(3)?;
        CovarianceMatrix::new(&s * total.as_matrix() * s.transpose())
    }

    fn signal_entries(&self) -> (f64, f64, f64) {
        let g = self.gamma_in.as_matrix();
        (g[(0, 0)], g[(1, 1)], g[(0, 1)])
    }
}

/// Receiver state, displacement map and outcome statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportResult {
    pub gamma_rec: CovarianceMatrix,
    /// Maps `(X_{x₀}, −X_{p₁})` to the receiver displacement in the `λ = ξ/√2` scaling;
    /// the quadrature displacement is `√2 · gain · outcome`.
    pub gain: DMatrix<f64>,
    /// Covariance block `K` of the outcomes; they are distributed as `N(0, K/2)`.
    pub outcome_covariance: DMatrix<f64>,
    pub fidelity_zero_mean: f64,
    /// `Γ_rec` from the generic homodyne reduction of `Γ₀₁₂`.
    pub gamma_rec_generic: CovarianceMatrix,
    pub gain_generic: DMatrix<f64>,
}

impl TeleportResult {
    /// `p(v) = exp(−vᵀK⁻¹v) / (π √det K)` for `v = (X_{x₀}, −X_{p₁})`.
    pub fn outcome_density(&self, outcome: [f64; 2]) -> f64 {
        let k = &self.outcome_covariance;
        let det = k[(0, 0)] * k[(1, 1)] - k[(0, 1)] * k[(1, 0)];
        let v = DVector::from_column_slice(&outcome);
        let q = (v.transpose() * inverse2(k) * &v)[(0, 0)];
        (-q).exp() / (PI * det.sqrt())
    }

    /// Conditional mean of the receiver mode in quadrature units.
    pub fn receiver_mean(&self, outcome: [f64; 2]) -> DVector<f64> {
        &self.gain * DVector::from_column_slice(&outcome) * SQRT_2
    }

    /// Largest entry-wise difference between the closed-form and generic
    /// receiver covariance and gain. Grows like `cosh 2ζ · ε` through cancellation.
    pub fn path_discrepancy(&self) -> f64 {
        max_abs(&(self.gamma_rec.as_matrix() - self.gamma_rec_generic.as_matrix()))
            .max(max_abs(&(&self.gain - &self.gain_generic)))
    }
}

fn inverse2(m: &DMatrix<f64>) -> DMatrix<f64> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    DMatrix::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]]) / det
}

/// Runs the protocol and reports the receiver state.
///
/// `Γ_rec` and the gain are evaluated as
/// `Γ_rec = R(Φ)[bΓ_in + κ1](Γ_in + a1)⁻¹R(Φ)ᵀ` and
/// `gain = s|T₁T₂| R(Φ)(Γ_in + a1)⁻¹Σ`, with `Φ = φ₁ + φ₂` and
/// `κ = ab − c₁² − c₂²` expanded so that no large terms cancel.
/// This stays accurate for arbitrarily large `ζ`.
pub fn teleport(setup: &TeleportSetup) -> Result<TeleportResult> {
    setup.validate()?;
    let coef = setup.coefficients();
    let (tau1, tau2) = (setup.f1.transmittance(), setup.f2.transmittance());
    let (g1, g2) = (setup.f1.noise(), setup.f2.noise());
    let (c, s) = ((2.0 * setup.zeta).cosh(), (2.0 * setup.zeta).sinh());
    let kappa = tau1 * tau2 + c * (tau1 * g2 + tau2 * g1) + g1 * g2;

    let gin = setup.gamma_in.as_matrix();
    let id = DMatrix::<f64>::identity(2, 2);
    let shifted_inv = inverse2(&(gin + &id * coef.a));
    let rot = rotation(setup.f1.phase + setup.f2.phase);
    let core = (gin * coef.b + &id * kappa) * &shifted_inv;
    let gamma_rec = CovarianceMatrix::new(symmetrize(&(&rot * core * rot.transpose())))?;
    let gain = &rot * &shifted_inv * sigma(1) * (s * setup.f1.t_mag * setup.f2.t_mag);

    let full = setup.tripartite_covariance()?;
    let hom = homodyne_project(&full, &[(0, Quadrature::X), (1, Quadrature::P)])?;
    let fidelity_zero_mean = fidelity(&setup.gamma_in, &gamma_rec)?;
    Ok(TeleportResult {
        gamma_rec,
        gain,
        outcome_covariance: hom.outcome_covariance,
        fidelity_zero_mean,
        gamma_rec_generic: hom.conditional.gamma_out,
        gain_generic: hom.conditional.mean_map,
    })
}

/// Entry-by-entry receiver covariance
/// `b1 − [(x+a)(y+a) − z²]⁻¹ · [[…]]` as printed for the fiber-degraded protocol.
///
/// Loses precision for large `ζ`, where `b` and the subtracted term nearly cancel.
pub fn receiver_covariance_explicit(setup: &TeleportSetup) -> Result<CovarianceMatrix> {
    setup.validate()?;
    let TmsvCoefficients { a, b, c1, c2 } = setup.coefficients();
    let (x, y, z) = setup.signal_entries();
    let den = (x + a) * (y + a) - z * z;
    let m00 = c2 * c2 * (x + a) + c1 * c1 * (y + a) + 2.0 * c1 * c2 * z;
    let m01 = c1 * c2 * (y - x) - z * (c1 * c1 - c2 * c2);
    let m11 = c1 * c1 * (x + a) + c2 * c2 * (y + a) - 2.0 * c1 * c2 * z;
    CovarianceMatrix::from_row_slice(2, &[b - m00 / den, -m01 / den, -m01 / den, b - m11 / den])
}

/// Overlap `2/√det(Γ_in + Γ_rec)` of two zero-mean single-mode Gaussian states.
pub fn fidelity(gamma_in: &CovarianceMatrix, gamma_rec: &CovarianceMatrix) -> Result<f64> {
    if gamma_in.dim() != 2 || gamma_rec.dim() != 2 {
        return Err(Error::Dimension(format!(
            "fidelity needs two single-mode states, got {}x{} and {}x{}",
            gamma_in.dim(),
            gamma_in.dim(),
            gamma_rec.dim(),
            gamma_rec.dim()
        )));
    }
    let sum = gamma_in.as_matrix() + gamma_rec.as_matrix();
    Ok(2.0 / (sum[(0, 0)] * sum[(1, 1)] - sum[(0, 1)] * sum[(1, 0)]).sqrt())
}

/// `√(1 − sinh²η / (cosh η + cosh 2ζ)²)` for a squeezed signal and an undisturbed TMSV.
pub fn pure_squeezed_fidelity(eta: f64, zeta: f64) -> f64 {
    let r = eta.sinh() / (eta.cosh() + (2.0 * zeta).cosh());
    (1.0 - r * r).sqrt()
}

/// `Σ · |T₂/T₁| · R(φ₁ + φ₂)`, the infinite-squeezing limit of the gain.
pub fn ideal_displacement_gain(f1: &FiberParams, f2: &FiberParams) -> Result<DMatrix<f64>> {
    f1.validate()?;
    f2.validate()?;
    if f1.t_mag == 0.0 {
        return Err(Error::InvalidParameter("|T₁| = 0: the sender receives no part of the resource".into()));
    }
    Ok(sigma(1) * rotation(f1.phase + f2.phase) * (f2.t_mag / f1.t_mag))
}

/// Mean and standard error of a Monte-Carlo fidelity estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloFidelity {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Average fidelity when the receiver displaces with `gain_used` instead of
/// the optimal conditional gain.
///
/// Outcomes are drawn from the outcome density; each contributes the
/// overlap `2/√det S · exp(−δᵀS⁻¹δ)` with `S = Γ_in + Γ_rec` and residual
/// displacement `δ = √2(gain − gain_used)·v`. Deterministic for a given seed.
pub fn fixed_gain_fidelity_mc(
    setup: &TeleportSetup,
    gain_used: &DMatrix<f64>,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloFidelity> {
    if gain_used.shape() != (2, 2) {
        return Err(Error::Dimension("gain must be 2x2".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let res = teleport(setup)?;
    let chol = (&res.outcome_covariance * 0.5)
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("outcome covariance is singular".into()))?
        .l();
    let sum = setup.gamma_in.as_matrix() + res.gamma_rec.as_matrix();
    let sum_inv = inverse2(&sum);
    let prefactor = res.fidelity_zero_mean;
    let h = (&res.gain - gain_used) * SQRT_2;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (mut acc, mut acc2) = (0.0, 0.0);
    for _ in 0..samples {
        let e = DVector::from_fn(2, |_, _| StandardNormal.sample(&mut rng));
        let delta = &h * (&chol * e);
        let f = prefactor * (-(delta.transpose() * &sum_inv * &delta)[(0, 0)]).exp();
        acc += f;
        acc2 += f * f;
    }
    let n = samples as f64;
    let mean = acc / n;
    let var = (acc2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloFidelity { mean, std_error: (var / n).sqrt(), samples })
}
