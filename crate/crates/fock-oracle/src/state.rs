use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FockError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Digits `(n₀, …, n_{M−1})` of a product-basis index.
pub(crate) fn digits(mut index: usize, modes: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; modes];
    for k in (0..modes).rev() {
        out[k] = index % d;
        index /= d;
    }
    out
}

pub(crate) fn stride(mode: usize, modes: usize, d: usize) -> usize {
    d.pow((modes - 1 - mode) as u32)
}

/// A pure state in the truncated product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockKet {
    pub modes: usize,
    pub cutoff: usize,
    pub amplitudes: DVector<Complex64>,
    /// Probability weight lost to the truncation before renormalization.
    pub truncation_weight: f64,
}

impl FockKet {
    pub fn new(modes: usize, cutoff: usize, amplitudes: DVector<Complex64>, truncation_weight: f64) -> Result<Self> {
        let dim = (cutoff + 1).pow(modes as u32);
        if amplitudes.len() != dim {
            return Err(FockError::Dimension(format!("expected {dim} amplitudes, got {}", amplitudes.len())));
        }
        Ok(Self { modes, cutoff, amplitudes, truncation_weight })
    }

    pub fn vacuum(modes: usize, cutoff: usize) -> Self {
        let mut amplitudes = DVector::from_element((cutoff + 1).pow(modes as u32), ZERO);
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { modes, cutoff, amplitudes, truncation_weight: 0.0 }
    }

    /// Single-mode number state `|n⟩`.
    pub fn number(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(FockError::InvalidParameter(format!("|{n}⟩ does not fit below cutoff {cutoff}")));
        }
        let mut amplitudes = DVector::from_element(cutoff + 1, ZERO);
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { modes: 1, cutoff, amplitudes, truncation_weight: 0.0 })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn to_density(&self) -> FockState {
        let rho = &self.amplitudes * self.amplitudes.adjoint();
        FockState { modes: self.modes, cutoff: self.cutoff, rho, truncation_weight: self.truncation_weight }
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &FockKet) -> Result<FockKet> {
        if self.cutoff != other.cutoff {
            return Err(FockError::Dimension("cutoffs differ".into()));
        }
        let (n, m) = (self.amplitudes.len(), other.amplitudes.len());
        let amps = DVector::from_fn(n * m, |i, _| self.amplitudes[i / m] * other.amplitudes[i % m]);
        Ok(FockKet {
            modes: self.modes + other.modes,
            cutoff: self.cutoff,
            amplitudes: amps,
            truncation_weight: 1.0 - (1.0 - self.truncation_weight) * (1.0 - other.truncation_weight),
        })
    }
}

/// A density matrix over the truncated product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub modes: usize,
    pub cutoff: usize,
    pub rho: DMatrix<Complex64>,
    /// Probability weight lost to the truncation when the state was built.
    pub truncation_weight: f64,
}

impl FockState {
    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum()
    }

    /// Fails when the construction truncated more weight than `budget`.
    pub fn check_budget(&self, budget: f64) -> Result<()> {
        if self.truncation_weight > budget {
            return Err(FockError::TruncationBudget { weight: self.truncation_weight, budget });
        }
        Ok(())
    }

    /// Population of basis states in which any mode sits at the cutoff.
    pub fn boundary_population(&self) -> f64 {
        let d = self.cutoff + 1;
        (0..self.dim())
            .filter(|&i| digits(i, self.modes, d).contains(&self.cutoff))
            .map(|i| self.rho[(i, i)].re)
            .sum()
    }

    /// Reduced state of the listed modes, in the listed order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<FockState> {
        let d = self.cutoff + 1;
        for &k in keep {
            if k >= self.modes {
                return Err(FockError::Dimension(format!("mode {k} out of range for {} mode(s)", self.modes)));
            }
        }
        let traced: Vec<usize> = (0..self.modes).filter(|k| !keep.contains(k)).collect();
        let dk = d.pow(keep.len() as u32);
        let dt = d.pow(traced.len() as u32);
        let index = |kd: &[usize], td: &[usize]| {
            let mut ns = vec![0; self.modes];
            keep.iter().zip(kd).for_each(|(&m, &n)| ns[m] = n);
            traced.iter().zip(td).for_each(|(&m, &n)| ns[m] = n);
            ns.iter().fold(0, |acc, &n| acc * d + n)
        };
        let mut out = DMatrix::from_element(dk, dk, ZERO);
        for t in 0..dt {
            let td = digits(t, traced.len(), d);
            let full: Vec<usize> = (0..dk).map(|k| index(&digits(k, keep.len(), d), &td)).collect();
            for (r, &i) in full.iter().enumerate() {
                for (c, &j) in full.iter().enumerate() {
                    out[(r, c)] += self.rho[(i, j)];
                }
            }
        }
        Ok(FockState { modes: keep.len(), cutoff: self.cutoff, rho: out, truncation_weight: self.truncation_weight })
    }

    /// Photon-number distribution of a single-mode state.
    pub fn photon_distribution(&self) -> Vec<f64> {
        self.rho.diagonal().iter().map(|z| z.re).collect()
    }
}

/// `√(1−q²) Σ qⁿ|nn⟩`, `q = tanh ζ`, cut at `cutoff` and renormalized.
pub fn build_tmsv_fock(zeta: f64, cutoff: usize) -> Result<FockState> {
    Ok(tmsv_ket(zeta, cutoff)?.to_density())
}

pub(crate) fn tmsv_ket(zeta: f64, cutoff: usize) -> Result<FockKet> {
    if cutoff < 1 {
        return Err(FockError::InvalidParameter("cutoff must be at least 1".into()));
    }
    if !zeta.is_finite() {
        return Err(FockError::InvalidParameter(format!("ζ = {zeta} is not finite")));
    }
    let q = zeta.tanh();
    let d = cutoff + 1;
    let coeffs: Vec<f64> = (0..d).map(|n| q.powi(n as i32)).collect();
    let kept: f64 = coeffs.iter().map(|c| c * c).sum::<f64>() * (1.0 - q * q);
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut amps = DVector::from_element(d * d, ZERO);
    for n in 0..d {
        amps[n * d + n] = Complex64::new(coeffs[n] / norm, 0.0);
    }
    FockKet::new(2, cutoff, amps, (1.0 - kept).max(0.0))
}

/// Thermal state `Σ nᵏ/(n+1)^{k+1} |k⟩⟨k|`, renormalized.
pub fn thermal_fock(mean_photons: f64, cutoff: usize) -> Result<FockState> {
    if !(mean_photons >= 0.0) || !mean_photons.is_finite() {
        return Err(FockError::InvalidParameter(format!("n = {mean_photons} must be finite and ≥ 0")));
    }
    let d = cutoff + 1;
    let ratio = mean_photons / (mean_photons + 1.0);
    let p: Vec<f64> = (0..d).map(|k| ratio.powi(k as i32) / (mean_photons + 1.0)).collect();
    let kept: f64 = p.iter().sum();
    let rho = DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(p[i] / kept, 0.0) } else { ZERO });
    Ok(FockState { modes: 1, cutoff, rho, truncation_weight: (1.0 - kept).max(0.0) })
}

/// Pure single-mode squeezed vacuum whose covariance matrix is `gamma`
/// (entries `[[Γxx, Γxp], [Γxp, Γpp]]`, determinant 1).
///
/// Uses `⟨a²⟩ = (Γxx − Γpp + 2iΓxp)/4 = −e^{iθ} sinh r cosh r` and the
/// amplitudes `c₀ = 1/√cosh r`,
/// `c_{2n+2}/c_{2n} = −e^{iθ} tanh r · √((2n+1)(2n+2)) / (2(n+1))`.
pub fn squeezed_vacuum_ket(gamma: [[f64; 2]; 2], cutoff: usize) -> Result<FockKet> {
    let [[gxx, gxp], [gpx, gpp]] = gamma;
    let det = gxx * gpp - gxp * gpx;
    if (gxp - gpx).abs() > 1e-12 || (det - 1.0).abs() > 1e-9 || gxx <= 0.0 {
        return Err(FockError::InvalidParameter(format!(
            "not the covariance matrix of a pure centred state (det = {det})"
        )));
    }
    let a2 = Complex64::new((gxx - gpp) / 4.0, gxp / 2.0);
    let mag = a2.norm();
    let d = cutoff + 1;
    let mut amps = DVector::from_element(d, ZERO);
    if mag == 0.0 {
        amps[0] = Complex64::new(1.0, 0.0);
        return FockKet::new(1, cutoff, amps, 0.0);
    }
    let r = 0.5 * (2.0 * mag).asinh();
    let phase = -a2 / mag;
    let step = -phase * r.tanh();
    let mut c = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    let mut n = 0;
    while 2 * n <= cutoff {
        amps[2 * n] = c;
        let nf = n as f64;
        c *= step * (((2.0 * nf + 1.0) * (2.0 * nf + 2.0)).sqrt() / (2.0 * (nf + 1.0)));
        n += 1;
    }
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    amps /= Complex64::new(kept.sqrt(), 0.0);
    FockKet::new(1, cutoff, amps, (1.0 - kept).max(0.0))
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn overlap_fock(psi: &FockKet, rho: &FockState) -> Result<f64> {
    if psi.amplitudes.len() != rho.dim() {
        return Err(FockError::Dimension("ket and density matrix live in different spaces".into()));
    }
    Ok((psi.amplitudes.adjoint() * &rho.rho * &psi.amplitudes)[(0, 0)].re)
}

/// Probability that every listed mode is found in the vacuum.
pub fn vacuum_probability(state: &FockState, measured: &[usize]) -> Result<f64> {
    let d = state.cutoff + 1;
    for &k in measured {
        if k >= state.modes {
            return Err(FockError::Dimension(format!("mode {k} out of range for {} mode(s)", state.modes)));
        }
    }
    Ok((0..state.dim())
        .filter(|&i| {
            let ns = digits(i, state.modes, d);
            measured.iter().all(|&k| ns[k] == 0)
        })
        .map(|i| state.rho[(i, i)].re)
        .sum())
}

/// First and symmetrized second moments of the quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    /// `⟨ξᵢ⟩`, interleaved `(x₀, p₀, x₁, p₁, …)`.
    pub mean: DVector<f64>,
    /// `Γᵢⱼ = ⟨ξᵢξⱼ + ξⱼξᵢ⟩ − 2⟨ξᵢ⟩⟨ξⱼ⟩`.
    pub gamma: DMatrix<f64>,
}

/// One ladder operator: `(mode, creation?)`.
type Ladder = (usize, bool);

/// `Tr(ρ · O)` for a product of ladder operators, applied right to left.
fn expect(state: &FockState, ops: &[Ladder]) -> Complex64 {
    let d = state.cutoff + 1;
    let mut acc = ZERO;
    for i in 0..state.dim() {
        let mut ns = digits(i, state.modes, d);
        let mut c = 1.0;
        let mut alive = true;
        for &(m, create) in ops.iter().rev() {
            if create {
                if ns[m] == state.cutoff {
                    alive = false;
                    break;
                }
                ns[m] += 1;
                c *= (ns[m] as f64).sqrt();
            } else {
                if ns[m] == 0 {
                    alive = false;
                    break;
                }
                c *= (ns[m] as f64).sqrt();
                ns[m] -= 1;
            }
        }
        if alive {
            let j = ns.iter().fold(0, |acc, &n| acc * d + n);
            // ⟨i|ρ O|i⟩ = c · ρ[i, j]
            acc += state.rho[(i, j)] * c;
        }
    }
    acc
}

/// Quadrature `ξ` as `α a + β a†`.
fn quadrature(index: usize) -> [(Ladder, Complex64); 2] {
    let m = index / 2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    if index.is_multiple_of(2) {
        [((m, false), Complex64::new(s, 0.0)), ((m, true), Complex64::new(s, 0.0))]
    } else {
        // p = (a − a†)/(i√2) = −i a/√2 + i a†/√2
        [((m, false), Complex64::new(0.0, -s)), ((m, true), Complex64::new(0.0, s))]
    }
}

/// Quadrature moments extracted from the density matrix.
pub fn covariance_from_fock(state: &FockState) -> Moments {
    let n = 2 * state.modes;
    let mean = DVector::from_fn(n, |i, _| quadrature(i).iter().map(|&(op, w)| w * expect(state, &[op])).sum::<Complex64>().re);
    let mut gamma = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut second = ZERO;
            for &(oi, wi) in &quadrature(i) {
                for &(oj, wj) in &quadrature(j) {
                    second += wi * wj * expect(state, &[oi, oj]);
                }
            }
            let v = 2.0 * second.re - 2.0 * mean[i] * mean[j];
            gamma[(i, j)] = v;
            gamma[(j, i)] = v;
        }
    }
    Moments { mean, gamma }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tmsv_at_zero_is_vacuum() {
        let s = build_tmsv_fock(0.0, 5).unwrap();
        assert_eq!(s.rho[(0, 0)], Complex64::new(1.0, 0.0));
        assert!((s.trace() - 1.0).abs() < 1e-15);
        assert_eq!(s.truncation_weight, 0.0);
    }

    #[test]
    fn tmsv_photon_statistics() {
        let s = build_tmsv_fock(0.5, 20).unwrap();
        let q2 = 0.5f64.tanh().powi(2);
        let p = s.partial_trace(&[0]).unwrap().photon_distribution();
        let kept: f64 = (0..=20).map(|n| (1.0 - q2) * q2.powi(n)).sum();
        for (n, pn) in p.iter().enumerate() {
            assert!((pn - (1.0 - q2) * q2.powi(n as i32) / kept).abs() < 1e-14);
        }
        assert!((s.truncation_weight - q2.powi(21)).abs() < 1e-15);
        assert!(s.check_budget(1e-6).is_ok());
        assert!(build_tmsv_fock(1.5, 5).unwrap().check_budget(1e-6).is_err());
    }

    #[test]
    fn vacuum_moments() {
        let m = covariance_from_fock(&FockKet::vacuum(2, 4).to_density());
        assert!((m.gamma.clone() - DMatrix::identity(4, 4)).amax() < 1e-15);
        assert!(m.mean.amax() < 1e-15);
    }

    #[test]
    fn number_state_moments() {
        let m = covariance_from_fock(&FockKet::number(1, 4).unwrap().to_density());
        assert!((m.gamma[(0, 0)] - 3.0).abs() < 1e-14);
        assert!((m.gamma[(1, 1)] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn squeezed_ket_reproduces_its_covariance() {
        let eta: f64 = 0.4;
        let g = [[eta.cosh(), eta.sinh()], [eta.sinh(), eta.cosh()]];
        let ket = squeezed_vacuum_ket(g, 30).unwrap();
        let m = covariance_from_fock(&ket.to_density());
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.gamma[(i, j)] - g[i][j]).abs() < 1e-10, "{i}{j}: {}", m.gamma[(i, j)]);
            }
        }
        let plain = squeezed_vacuum_ket([[0.5, 0.0], [0.0, 2.0]], 30).unwrap();
        let m = covariance_from_fock(&plain.to_density());
        assert!((m.gamma[(0, 0)] - 0.5).abs() < 1e-8 && (m.gamma[(1, 1)] - 2.0).abs() < 1e-8);
        assert!(squeezed_vacuum_ket([[2.0, 0.0], [0.0, 2.0]], 10).is_err());
    }

    #[test]
    fn overlap_basics() {
        let v = FockKet::vacuum(1, 3);
        let one = FockKet::number(1, 3).unwrap();
        assert!((overlap_fock(&v, &v.to_density()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(overlap_fock(&v, &one.to_density()).unwrap(), 0.0);
    }

    #[test]
    fn thermal_vacuum_probability() {
        let th = thermal_fock(0.5, 30).unwrap();
        assert!((vacuum_probability(&th, &[0]).unwrap() - 1.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let s = build_tmsv_fock(0.3, 10).unwrap();
        let r = s.partial_trace(&[1]).unwrap();
        assert!((r.trace() - s.trace()).abs() < 1e-14);
        let swapped = s.partial_trace(&[1, 0]).unwrap();
        assert!((swapped.trace() - 1.0).abs() < 1e-14);
    }
}
