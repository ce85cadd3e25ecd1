//! Two-mode separability, logarithmic negativity and fiber degradation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::min_eig_hermitian;
use crate::symplectic::{require_physical, sigma, symplectic_eigenvalues, CovarianceMatrix};
use crate::DEFAULT_TOL;

/// Absolute tolerance on the criterion inequality; boundary states count as separable.
pub const CRITERION_TOL: f64 = 1e-9;

/// Width of the band around `ν̃₋ = 1` inside which the two separability
/// tests may legitimately disagree through round-off.
pub const BOUNDARY_BAND: f64 = 1e-8;

/// Logarithm used for entropy-like quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogBase {
    Natural,
    Two,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LogBase::Natural => "ln",
            LogBase::Two => "log2",
        }
    }
}

/// Result of the two-mode separability test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    /// Left-hand side `det C₁C₂ + (1 − |det C₃|)² − Tr[C₁ΣC₃ΣC₂ΣC₃ᵀΣ]`.
    pub lhs: f64,
    /// Right-hand side `det C₁ + det C₂`.
    pub rhs: f64,
    /// Smallest eigenvalue of `Γ^PT + iΣ`.
    pub pt_min_eig: f64,
    /// Smallest symplectic eigenvalue `ν̃₋` of `Γ^PT`.
    pub pt_symplectic_min: f64,
}

impl SeparabilityVerdict {
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport {
    /// `f(Γ)`, equal to the smallest symplectic eigenvalue of `Γ^PT`.
    pub f_value: f64,
    pub e_n: f64,
    pub log_base: LogBase,
}

fn require_two_modes(gamma: &CovarianceMatrix) -> Result<()> {
    if gamma.dim() != 4 {
        return Err(Error::Dimension(format!(
            "two-mode covariance matrix required, got {}x{}",
            gamma.dim(),
            gamma.dim()
        )));
    }
    Ok(())
}

struct Blocks {
    c1: DMatrix<f64>,
    c2: DMatrix<f64>,
    c3: DMatrix<f64>,
}

fn blocks(gamma: &CovarianceMatrix) -> Blocks {
    let g = gamma.as_matrix();
    Blocks {
        c1: g.view((0, 0), (2, 2)).into_owned(),
        c2: g.view((2, 2), (2, 2)).into_owned(),
        c3: g.view((0, 2), (2, 2)).into_owned(),
    }
}

fn det2(m: &DMatrix<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `Γ^PT = PΓPᵀ` with `P = diag(1, 1, 1, −1)`.
pub fn partial_transpose(gamma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    require_two_modes(gamma)?;
    let mut g = gamma.as_matrix().clone();
    for k in 0..4 {
        if k != 3 {
            g[(3, k)] = -g[(3, k)];
            g[(k, 3)] = -g[(k, 3)];
        }
    }
    Ok(CovarianceMatrix::from_symmetric_unchecked(g))
}

/// Symplectic eigenvalues of `Γ^PT`, ascending.
pub fn pt_symplectic_eigenvalues(gamma: &CovarianceMatrix) -> Result<Vec<f64>> {
    Ok(symplectic_eigenvalues(&partial_transpose(gamma)?))
}

/// Evaluates the separability criterion and cross-checks it against the
/// partial-transpose uncertainty test.
///
/// The two verdicts must agree unless `ν̃₋` lies within [`BOUNDARY_BAND`] of 1.
pub fn is_separable(gamma: &CovarianceMatrix) -> Result<SeparabilityVerdict> {
    require_two_modes(gamma)?;
    require_physical(gamma)?;
    let Blocks { c1, c2, c3 } = blocks(gamma);
    let sig = sigma(1);
    let (d1, d2, d3) = (det2(&c1), det2(&c2), det2(&c3));
    let trace = (&c1 * &sig * &c3 * &sig * &c2 * &sig * c3.transpose() * &sig).trace();
    let lhs = d1 * d2 + (1.0 - d3.abs()).powi(2) - trace;
    let rhs = d1 + d2;
    let separable = lhs - rhs >= -CRITERION_TOL;

    let pt = partial_transpose(gamma)?;
    let pt_min_eig = min_eig_hermitian(pt.as_matrix(), &sigma(2));
    let nu_min = symplectic_eigenvalues(&pt)[0];
    let pt_separable = nu_min >= 1.0 - DEFAULT_TOL;
    if separable != pt_separable && (nu_min - 1.0).abs() > BOUNDARY_BAND {
        return Err(Error::InconsistentVerdict { criterion_margin: lhs - rhs, pt_margin: nu_min - 1.0 });
    }
    Ok(SeparabilityVerdict { separable, lhs, rhs, pt_min_eig, pt_symplectic_min: nu_min })
}

/// Closed-form logarithmic negativity of a two-mode state:
/// `f(Γ)² = A − √(A² − det Γ)` with `A = ½(det C₁ + det C₂) − det C₃`,
/// and `E_N = −log f` when `f < 1`.
pub fn log_negativity(gamma: &CovarianceMatrix, base: LogBase) -> Result<NegativityReport> {
    require_two_modes(gamma)?;
    require_physical(gamma)?;
    let Blocks { c1, c2, c3 } = blocks(gamma);
    let a = 0.5 * (det2(&c1) + det2(&c2)) - det2(&c3);
    let det = gamma.determinant();
    let mut disc = a * a - det;
    if disc < 0.0 {
        if disc < -DEFAULT_TOL * (a * a).max(1.0) {
            return Err(Error::NegativeDiscriminant(disc));
        }
        disc = 0.0;
    }
    // A − √disc without cancellation
    let f2 = det / (a + disc.sqrt());
    let f_value = f2.max(0.0).sqrt();
    let e_n = if f_value < 1.0 { base.from_nats(-f_value.ln()) } else { 0.0 };
    Ok(NegativityReport { f_value, e_n, log_base: base })
}

/// Logarithmic negativity from the symplectic spectrum of `Γ^PT`:
/// `−Σ log ν̃ₖ` over the eigenvalues below one.
pub fn log_negativity_general(gamma: &CovarianceMatrix, base: LogBase) -> Result<f64> {
    require_physical(gamma)?;
    let nats = pt_symplectic_eigenvalues(gamma)?
        .into_iter()
        .filter(|&nu| nu < 1.0)
        .map(|nu| -nu.ln())
        .sum();
    Ok(base.from_nats(nats))
}

/// Entanglement entropy of the TMSV, `−ln(1−q²) − q²/(1−q²)·ln q²` with `q = tanh ζ`.
pub fn tmsv_entropy(zeta: f64, base: LogBase) -> f64 {
    let z = zeta.abs();
    if z == 0.0 {
        return 0.0;
    }
    // 1/(1−q²) = cosh²ζ and q²/(1−q²) = sinh²ζ
    let ln_cosh = z + (-2.0 * z).exp().ln_1p() - std::f64::consts::LN_2;
    let ln_q2 = 2.0 * (-2.0 / ((2.0 * z).exp() + 1.0)).ln_1p();
    base.from_nats(2.0 * ln_cosh - z.sinh().powi(2) * ln_q2)
}

/// A threshold that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Finite(f64),
    Infinite,
}

impl Threshold {
    pub fn value(self) -> f64 {
        match self {
            Threshold::Finite(v) => v,
            Threshold::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Threshold::Infinite)
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if !(zeta >= 0.0) || !zeta.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing ζ = {zeta} must be finite and ≥ 0")));
    }
    Ok(())
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// Thermal photon number above which a TMSV sent through two identical
/// fibers becomes separable: `|T|²(1−e^{−2ζ}) / (2(1−|R|²−|T|²))`.
///
/// Infinite when the fibers do not absorb.
pub fn fiber_separability_threshold(zeta: f64, t_mag: f64, r_mag: f64) -> Result<Threshold> {
    check_zeta(zeta)?;
    check_unit("|T|", t_mag)?;
    check_unit("|R|", r_mag)?;
    let (t2, r2) = (t_mag * t_mag, r_mag * r_mag);
    let absorbed = 1.0 - t2 - r2;
    if absorbed < -1e-12 {
        return Err(Error::InvalidParameter(format!("|T|² + |R|² = {} exceeds 1", t2 + r2)));
    }
    let num = t2 * -(-2.0 * zeta).exp_m1();
    if num == 0.0 {
        return Ok(Threshold::Finite(0.0));
    }
    if absorbed <= 0.0 {
        return Ok(Threshold::Infinite);
    }
    Ok(Threshold::Finite(num / (2.0 * absorbed)))
}

/// Lambert–Beer fiber length after which the TMSV becomes separable:
/// `l_S = ½ l_A ln[1 + (1−e^{−2ζ})/(2n_th)]`, infinite at `n_th = 0`.
pub fn separability_length(zeta: f64, n_th: f64, absorption_length: f64) -> Result<Threshold> {
    check_zeta(zeta)?;
    if !(n_th >= 0.0) || !n_th.is_finite() {
        return Err(Error::InvalidParameter(format!("n_th = {n_th} must be finite and ≥ 0")));
    }
    if !(absorption_length > 0.0) {
        return Err(Error::InvalidParameter(format!("absorption length {absorption_length} must be > 0")));
    }
    let num = -(-2.0 * zeta).exp_m1();
    if num == 0.0 {
        return Ok(Threshold::Finite(0.0));
    }
    if n_th == 0.0 {
        return Ok(Threshold::Infinite);
    }
    Ok(Threshold::Finite(0.5 * absorption_length * (num / (2.0 * n_th)).ln_1p()))
}

/// Logarithmic negativity after two zero-temperature fibers of total
/// transmission `|T|`: `−ln[1 − |T|²(1−e^{−2ζ})]`. Independent of `|R|`.
pub fn transmitted_log_negativity(zeta: f64, t_mag: f64, base: LogBase) -> Result<f64> {
    check_zeta(zeta)?;
    check_unit("|T|", t_mag)?;
    let t2 = t_mag * t_mag;
    // 1 − |T|²(1 − e^{−2ζ}) written without cancellation
    let inner = (1.0 - t2) + t2 * (-2.0 * zeta).exp();
    Ok(base.from_nats(-inner.ln()))
}

/// Upper bound `−ln(1 − e^{−2l/l_A})` on the entanglement that survives a
/// fiber of length `l`, reached for infinite squeezing.
pub fn max_transmittable(length: f64, absorption_length: f64, base: LogBase) -> Result<f64> {
    if !(length >= 0.0) || !(absorption_length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need l ≥ 0 and l_A > 0, got l = {length}, l_A = {absorption_length}"
        )));
    }
    Ok(base.from_nats(-(-(-2.0 * length / absorption_length).exp_m1()).ln()))
}

/// `−ln(1 − |T|²)`, the same bound expressed through the transmittance.
pub fn max_transmittable_for_transmittance(t2: f64, base: LogBase) -> Result<f64> {
    check_unit("|T|²", t2)?;
    Ok(base.from_nats(-(-t2).ln_1p()))
}
