use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::homodyne::wavefunctions_at;
use crate::loss::apply_loss_fock;
use crate::state::{tmsv_ket, FockKet, FockState};

/// Pure three-mode teleportation run in the number basis.
///
/// Mode 0 holds the signal, modes 1 and 2 a TMSV. A 50:50 beamsplitter with
/// `U a₀† U† = (a₀† − a₁†)/√2`, `U a₁† U† = (a₀† + a₁†)/√2` mixes modes 0 and 1.
/// Mode 0 is then projected on a `p` eigenstate and mode 1 on an `x`
/// eigenstate, leaving a pure state on mode 2.
#[derive(Debug, Clone)]
pub struct TeleportOracle {
    pub cutoff: usize,
    /// Three-mode ket after the beamsplitter.
    pub state: FockKet,
}

/// Receiver state for one pair of outcomes.
#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    /// Joint density of the `p₀` and `x₁` outcomes.
    pub density: f64,
    /// Normalized receiver state.
    pub receiver: FockState,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Amplitude of `|m, N−m⟩` in `U|k, N−k⟩`.
fn beamsplitter_element(total: usize, m: usize, k: usize) -> f64 {
    let l = total - k;
    let mut acc = 0.0;
    for i in 0..=k.min(m) {
        if m - i > l {
            continue;
        }
        let j = m - i;
        let sign = if (k - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * binomial(k, i) * binomial(l, j);
    }
    acc * (factorial(m) * factorial(total - m) / (factorial(k) * factorial(l) * 2f64.powi(total as i32))).sqrt()
}

impl TeleportOracle {
    pub fn new(signal: &FockKet, zeta: f64, cutoff: usize) -> Result<Self> {
        if signal.modes != 1 || signal.cutoff != cutoff {
            return Err(FockError::Dimension("signal must be a single-mode ket with the same cutoff".into()));
        }
        let initial = signal.tensor(&tmsv_ket(zeta, cutoff)?)?;
        let d = cutoff + 1;
        let mut out = DVector::from_element(d * d * d, Complex64::new(0.0, 0.0));
        for k in 0..d {
            for l in 0..d {
                let total = k + l;
                let lo = total.saturating_sub(cutoff);
                let hi = total.min(cutoff);
                let coeffs: Vec<f64> = (lo..=hi).map(|m| beamsplitter_element(total, m, k)).collect();
                for n2 in 0..d {
                    let amp = initial.amplitudes[(k * d + l) * d + n2];
                    if amp == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (idx, m) in (lo..=hi).enumerate() {
                        out[(m * d + (total - m)) * d + n2] += amp * coeffs[idx];
                    }
                }
            }
        }
        let kept: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        let weight = 1.0 - (1.0 - initial.truncation_weight) * kept;
        Ok(Self { cutoff, state: FockKet::new(3, cutoff, out, weight.max(0.0))? })
    }

    /// Conditions on `p₀ = outcome[0]`, `x₁ = outcome[1]` and sends mode 2
    /// through a zero-temperature fiber of transmittance `receiver_transmittance`.
    pub fn outcome(&self, outcome: [f64; 2], receiver_transmittance: f64) -> Result<TeleportOutcome> {
        let d = self.cutoff + 1;
        let psi0 = wavefunctions_at(outcome[0], self.cutoff);
        let psi1 = wavefunctions_at(outcome[1], self.cutoff);
        // ⟨X, π/2|n⟩ = (−i)ⁿ ψₙ(X)
        let bra0: Vec<Complex64> =
            (0..d).map(|n| Complex64::from_polar(psi0[n], -(n as f64) * std::f64::consts::FRAC_PI_2)).collect();
        let mut rec = DVector::from_element(d, Complex64::new(0.0, 0.0));
        for n0 in 0..d {
            for n1 in 0..d {
                let w = bra0[n0] * psi1[n1];
                for n2 in 0..d {
                    rec[n2] += w * self.state.amplitudes[(n0 * d + n1) * d + n2];
                }
            }
        }
        let density: f64 = rec.iter().map(|z| z.norm_sqr()).sum();
        if density > 0.0 {
            rec /= Complex64::new(density.sqrt(), 0.0);
        }
        let pure = FockKet::new(1, self.cutoff, rec, self.state.truncation_weight)?.to_density();
        let receiver = if receiver_transmittance < 1.0 { apply_loss_fock(&pure, 0, receiver_transmittance)? } else { pure };
        Ok(TeleportOutcome { density, receiver })
    }
}
