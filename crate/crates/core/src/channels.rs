//! Trace-preserving Gaussian channels `Γ → AΓAᵀ + G` and absorbing fibers.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{direct_sum, ensure_even_square, max_abs, min_eig_hermitian, rotation, symmetrize};
use crate::states::GaussianState;
use crate::symplectic::{sigma, CovarianceMatrix};
use crate::DEFAULT_TOL;

/// A Gaussian CP map acting as `Γ → AΓAᵀ + G`, `κ → Aκ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    a: DMatrix<f64>,
    g: DMatrix<f64>,
}

impl GaussianChannel {
    pub fn new(a: DMatrix<f64>, g: DMatrix<f64>) -> Result<Self> {
        let n = ensure_even_square(&a, "channel matrix A")?;
        let m = ensure_even_square(&g, "channel noise G")?;
        if n != m {
            return Err(Error::Dimension(format!("A is {0}x{0} but G is {1}x{1}", 2 * n, 2 * m)));
        }
        let asym = max_abs(&(&g - g.transpose()));
        if asym > DEFAULT_TOL * max_abs(&g).max(1.0) {
            return Err(Error::InvalidParameter(format!("noise matrix G is not symmetric (deviation {asym:e})")));
        }
        Ok(Self { a, g: symmetrize(&g) })
    }

    pub fn identity(modes: usize) -> Self {
        Self { a: DMatrix::identity(2 * modes, 2 * modes), g: DMatrix::zeros(2 * modes, 2 * modes) }
    }

    pub fn modes(&self) -> usize {
        self.a.nrows() / 2
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// The channel that applies `first` and then `self`:
    /// `(A, G)∘(A′, G′) = (AA′, AG′Aᵀ + G)`.
    pub fn after(&self, first: &GaussianChannel) -> Result<GaussianChannel> {
        if self.modes() != first.modes() {
            return Err(Error::Dimension("cannot compose channels on different mode counts".into()));
        }
        Ok(Self {
            a: &self.a * &first.a,
            g: symmetrize(&(&self.a * &first.g * self.a.transpose() + &self.g)),
        })
    }

    /// Independent channels on disjoint mode sets.
    pub fn direct_sum(&self, other: &GaussianChannel) -> GaussianChannel {
        Self { a: direct_sum(&self.a, &other.a), g: direct_sum(&self.g, &other.g) }
    }

    /// Smallest eigenvalue of the Hermitian certificate `G + iΣ − iAΣAᵀ`.
    pub fn certificate_min_eigenvalue(&self) -> f64 {
        let sig = sigma(self.modes());
        let im = &sig - &self.a * &sig * self.a.transpose();
        min_eig_hermitian(&self.g, &im)
    }
}

/// True iff `G + iΣ − iAΣAᵀ ≥ 0` to within `tol`.
///
/// This is the state-independent condition for the map to send every
/// physical covariance matrix to a physical one.
pub fn validate_channel(ch: &GaussianChannel, tol: f64) -> bool {
    ch.certificate_min_eigenvalue() >= -tol
}

pub fn apply_channel(state: &GaussianState, ch: &GaussianChannel) -> Result<GaussianState> {
    if state.modes() != ch.modes() {
        return Err(Error::Dimension(format!(
            "state has {} mode(s), channel acts on {}",
            state.modes(),
            ch.modes()
        )));
    }
    let min = ch.certificate_min_eigenvalue();
    if min < -DEFAULT_TOL {
        return Err(Error::InvalidChannel { min_eigenvalue: min });
    }
    let gamma = symmetrize(&(&ch.a * state.gamma().as_matrix() * ch.a.transpose() + &ch.g));
    let kappa = &ch.a * state.kappa();
    GaussianState::new(kappa, CovarianceMatrix::new(gamma)?)
}

/// Single-frequency description of an absorbing fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberParams {
    /// Transmission magnitude `|T|`.
    pub t_mag: f64,
    /// Transmission phase `φ` in radians.
    pub phase: f64,
    /// Reflection magnitude `|R|`.
    pub r_mag: f64,
    /// Mean thermal photon number of the fiber's reservoir.
    pub n_th: f64,
}

impl FiberParams {
    pub fn new(t_mag: f64, phase: f64, r_mag: f64, n_th: f64) -> Result<Self> {
        let p = Self { t_mag, phase, r_mag, n_th };
        p.validate()?;
        Ok(p)
    }

    pub fn ideal() -> Self {
        Self { t_mag: 1.0, phase: 0.0, r_mag: 0.0, n_th: 0.0 }
    }

    /// Fiber with transmittance `|T|²` and no reflection or phase.
    pub fn with_transmittance(t2: f64, n_th: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t2) {
            return Err(Error::InvalidParameter(format!("transmittance |T|² = {t2} outside [0, 1]")));
        }
        Self::new(t2.sqrt(), 0.0, 0.0, n_th)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(0.0..=1.0).contains(&self.t_mag) {
            return bad(format!("|T| = {} outside [0, 1]", self.t_mag));
        }
        if !(0.0..=1.0).contains(&self.r_mag) {
            return bad(format!("|R| = {} outside [0, 1]", self.r_mag));
        }
        if !(self.n_th >= 0.0) || !self.n_th.is_finite() {
            return bad(format!("n_th = {} must be finite and ≥ 0", self.n_th));
        }
        if !self.phase.is_finite() {
            return bad(format!("phase {} is not finite", self.phase));
        }
        if self.transmittance() + self.reflectance() > 1.0 + 1e-12 {
            return bad(format!(
                "|T|² + |R|² = {} exceeds 1",
                self.transmittance() + self.reflectance()
            ));
        }
        Ok(())
    }

    pub fn transmittance(&self) -> f64 {
        self.t_mag * self.t_mag
    }

    pub fn reflectance(&self) -> f64 {
        self.r_mag * self.r_mag
    }

    /// Fraction `1 − |T|² − |R|²` absorbed inside the fiber.
    pub fn absorbance(&self) -> f64 {
        (1.0 - self.transmittance() - self.reflectance()).max(0.0)
    }

    /// Added noise `|R|² + (2n_th + 1)(1 − |T|² − |R|²)`.
    pub fn noise(&self) -> f64 {
        self.reflectance() + (2.0 * self.n_th + 1.0) * self.absorbance()
    }
}

/// Lambert–Beer fiber of length `length` with absorption length
/// `absorption_length`: `|T| = e^{−l/l_A}`, `R = 0`.
pub fn fiber_from_length(length: f64, absorption_length: f64, n_th: f64) -> Result<FiberParams> {
    if !(length >= 0.0) || !(absorption_length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need l ≥ 0 and l_A > 0, got l = {length}, l_A = {absorption_length}"
        )));
    }
    FiberParams::new((-length / absorption_length).exp(), 0.0, 0.0, n_th)
}

/// Single-mode fiber channel: `A = |T|·R(φ)`, `G = [|R|² + (2n_th+1)(1−|T|²−|R|²)]·1`.
pub fn fiber_channel(p: &FiberParams) -> Result<GaussianChannel> {
    p.validate()?;
    Ok(GaussianChannel {
        a: rotation(p.phase) * p.t_mag,
        g: DMatrix::from_diagonal_element(2, 2, p.noise()),
    })
}

/// TMSV whose two arms went through fibers `f1` and `f2`.
///
/// ```text
/// ⎛ a   0   c₁  c₂ ⎞   a  = c|T₁|² + noise₁,  c₁ = s·Re(T₁T₂)
/// ⎜ 0   a   c₂ −c₁ ⎟   b  = c|T₂|² + noise₂,  c₂ = s·Im(T₁T₂)
/// ⎜ c₁  c₂  b   0  ⎟
/// ⎝ c₂ −c₁  0   b  ⎠   c = cosh 2ζ, s = sinh 2ζ
/// ```
pub fn degraded_tmsv(zeta: f64, f1: &FiberParams, f2: &FiberParams) -> Result<CovarianceMatrix> {
    f1.validate()?;
    f2.validate()?;
    let c = TmsvCoefficients::new(zeta, f1, f2);
    #[rustfmt::skip]
    let g = DMatrix::from_row_slice(4, 4, &[
        c.a,   0.0,   c.c1,  c.c2,
        0.0,   c.a,   c.c2, -c.c1,
        c.c1,  c.c2,  c.b,   0.0,
        c.c2, -c.c1,  0.0,   c.b,
    ]);
    CovarianceMatrix::new(g)
}

/// The entries `a`, `b`, `c₁`, `c₂` of a fiber-degraded TMSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmsvCoefficients {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
}

impl TmsvCoefficients {
    pub fn new(zeta: f64, f1: &FiberParams, f2: &FiberParams) -> Self {
        let (c, s) = ((2.0 * zeta).cosh(), (2.0 * zeta).sinh());
        let (sin, cos) = (f1.phase + f2.phase).sin_cos();
        let t12 = f1.t_mag * f2.t_mag;
        Self {
            a: c * f1.transmittance() + f1.noise(),
            b: c * f2.transmittance() + f2.noise(),
            c1: s * t12 * cos,
            c2: s * t12 * sin,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    #[test]
    fn thermal_state_from_pure_noise() {
        let n = 1.7;
        let ch = GaussianChannel::new(DMatrix::identity(2, 2), DMatrix::from_diagonal_element(2, 2, 2.0 * n)).unwrap();
        let out = apply_channel(&GaussianState::vacuum(1), &ch).unwrap();
        assert!(close(out.gamma().as_matrix(), GaussianState::thermal(&[n]).unwrap().gamma().as_matrix(), 1e-15));
    }

    #[test]
    fn identity_channel_is_a_no_op() {
        let st = GaussianState::tmsv(0.4).displaced(DVector::from_column_slice(&[1.0, -2.0, 0.5, 0.0])).unwrap();
        let out = apply_channel(&st, &GaussianChannel::identity(2)).unwrap();
        assert_eq!(out, st);
    }

    #[test]
    fn ideal_fibers_leave_the_tmsv_alone() {
        let ideal = fiber_channel(&FiberParams::ideal()).unwrap();
        assert_eq!(ideal.a(), &DMatrix::identity(2, 2));
        assert_eq!(ideal.g(), &DMatrix::zeros(2, 2));
        let st = GaussianState::tmsv(0.9);
        let out = apply_channel(&st, &ideal.direct_sum(&ideal)).unwrap();
        assert!(close(out.gamma().as_matrix(), st.gamma().as_matrix(), 1e-15));
        let dec = degraded_tmsv(0.9, &FiberParams::ideal(), &FiberParams::ideal()).unwrap();
        assert!(close(dec.as_matrix(), st.gamma().as_matrix(), 1e-15));
    }

    #[test]
    fn half_transmitting_fiber() {
        let ch = fiber_channel(&FiberParams::with_transmittance(0.5, 0.0).unwrap()).unwrap();
        assert!(close(ch.a(), &DMatrix::from_diagonal_element(2, 2, 0.5f64.sqrt()), 1e-15));
        assert!(close(ch.g(), &DMatrix::from_diagonal_element(2, 2, 0.5), 1e-15));
    }

    #[test]
    fn opaque_hot_fiber_outputs_thermal_light() {
        let ch = fiber_channel(&FiberParams::new(0.0, 0.0, 0.0, 2.0).unwrap()).unwrap();
        assert!(close(ch.g(), &DMatrix::from_diagonal_element(2, 2, 5.0), 1e-15));
        let out = apply_channel(&GaussianState::squeezed(0.8, 0.3), &ch).unwrap();
        assert!(close(out.gamma().as_matrix(), GaussianState::thermal(&[2.0]).unwrap().gamma().as_matrix(), 1e-15));
    }

    #[test]
    fn fiber_parameter_ranges() {
        assert!(FiberParams::new(0.9, 0.0, 0.5, 0.0).is_err());
        assert!(FiberParams::new(1.1, 0.0, 0.0, 0.0).is_err());
        assert!(FiberParams::new(0.5, 0.0, 0.0, -1.0).is_err());
        assert!(fiber_from_length(1.0, 0.0, 0.0).is_err());
        let f = fiber_from_length(0.5, 2.0, 0.1).unwrap();
        assert!((f.t_mag - (-0.25f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn validity_certificate() {
        assert!(validate_channel(&GaussianChannel::identity(1), 1e-12));
        let noisy = GaussianChannel::new(DMatrix::identity(2, 2), DMatrix::from_diagonal_element(2, 2, -0.1)).unwrap();
        assert!(!validate_channel(&noisy, 1e-9));
        assert!(matches!(apply_channel(&GaussianState::vacuum(1), &noisy), Err(Error::InvalidChannel { .. })));
        // pure attenuation without the matching noise
        let lossy = GaussianChannel::new(DMatrix::from_diagonal_element(2, 2, 0.5), DMatrix::zeros(2, 2)).unwrap();
        assert!(!validate_channel(&lossy, 1e-9));
    }

    #[test]
    fn degraded_tmsv_matches_uniform_loss_formula() {
        let (zeta, t, r, n) = (0.7, 0.8, 0.3, 0.4);
        let f = FiberParams::new(t, 0.0, r, n).unwrap();
        let dec = degraded_tmsv(zeta, &f, &f).unwrap();
        let t2 = t * t;
        let noise = r * r + (2.0 * n + 1.0) * (1.0 - t2 - r * r);
        let expected = GaussianState::tmsv(zeta).gamma().as_matrix() * t2 + DMatrix::from_diagonal_element(4, 4, noise);
        assert!(close(dec.as_matrix(), &expected, 1e-14));
    }

    #[test]
    fn degraded_tmsv_phase_example() {
        let q = std::f64::consts::FRAC_PI_4;
        let f1 = FiberParams::new(0.9, q, 0.0, 0.0).unwrap();
        let f2 = FiberParams::new(0.8, q, 0.0, 0.0).unwrap();
        let c = TmsvCoefficients::new(0.3, &f1, &f2);
        assert!(c.c1.abs() < 1e-15);
        // 0.72 · sinh(0.6)
        assert!((c.c2 - 0.45839057914673365).abs() < 1e-14);
    }

    #[test]
    fn degraded_tmsv_is_the_composition_of_fiber_channels() {
        let f1 = FiberParams::new(0.85, 0.4, 0.2, 0.3).unwrap();
        let f2 = FiberParams::new(0.6, -1.3, 0.1, 0.05).unwrap();
        let ch = fiber_channel(&f1).unwrap().direct_sum(&fiber_channel(&f2).unwrap());
        let via_channel = apply_channel(&GaussianState::tmsv(0.45), &ch).unwrap();
        let direct = degraded_tmsv(0.45, &f1, &f2).unwrap();
        assert!(close(via_channel.gamma().as_matrix(), direct.as_matrix(), 1e-14));
    }

    #[test]
    fn composition_order() {
        let c1 = fiber_channel(&FiberParams::new(0.7, 0.5, 0.0, 0.2).unwrap()).unwrap();
        let c2 = fiber_channel(&FiberParams::new(0.9, -0.2, 0.1, 0.0).unwrap()).unwrap();
        let st = GaussianState::squeezed(0.3, 0.1).displaced(DVector::from_column_slice(&[0.4, 1.0])).unwrap();
        let seq = apply_channel(&apply_channel(&st, &c1).unwrap(), &c2).unwrap();
        let once = apply_channel(&st, &c2.after(&c1).unwrap()).unwrap();
        assert!(close(seq.gamma().as_matrix(), once.gamma().as_matrix(), 1e-14));
        assert!((seq.kappa() - once.kappa()).amax() < 1e-14);
    }
}
