use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::state::{digits, stride, FockState};

/// Loss on one mode: a beamsplitter of transmittance `|T|²` mixes the mode
/// with a vacuum ancilla, which is then traced out.
///
/// Tracing the ancilla in the number basis leaves the Kraus operators
/// `E_k = Σₙ √C(n,k) |T|^{n−k} (1−|T|²)^{k/2} |n−k⟩⟨n|`.
pub fn apply_loss_fock(state: &FockState, mode: usize, transmittance: f64) -> Result<FockState> {
    if !(0.0..=1.0).contains(&transmittance) {
        return Err(FockError::InvalidParameter(format!("|T|² = {transmittance} outside [0, 1]")));
    }
    if mode >= state.modes {
        return Err(FockError::Dimension(format!("mode {mode} out of range for {} mode(s)", state.modes)));
    }
    let d = state.cutoff + 1;
    let t = transmittance.sqrt();
    let r = (1.0 - transmittance).sqrt();
    // e[k][n] for k ≤ n
    let mut e = vec![vec![0.0; d]; d];
    for n in 0..d {
        let mut binom: f64 = 1.0;
        for k in 0..=n {
            e[k][n] = binom.sqrt() * t.powi((n - k) as i32) * r.powi(k as i32);
            binom *= (n - k) as f64 / (k + 1) as f64;
        }
    }
    let step = stride(mode, state.modes, d);
    let dim = state.dim();
    let level: Vec<usize> = (0..dim).map(|i| digits(i, state.modes, d)[mode]).collect();
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for i in 0..dim {
        for j in 0..dim {
            let v = state.rho[(i, j)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (ni, nj) = (level[i], level[j]);
            for k in 0..=ni.min(nj) {
                out[(i - k * step, j - k * step)] += v * (e[k][ni] * e[k][nj]);
            }
        }
    }
    Ok(FockState { modes: state.modes, cutoff: state.cutoff, rho: out, truncation_weight: state.truncation_weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{build_tmsv_fock, covariance_from_fock, FockKet};

    #[test]
    fn full_transmission_is_identity() {
        let s = build_tmsv_fock(0.4, 8).unwrap();
        assert_eq!(apply_loss_fock(&s, 1, 1.0).unwrap(), s);
    }

    #[test]
    fn full_loss_empties_the_mode() {
        let one = FockKet::number(1, 4).unwrap().to_density();
        let out = apply_loss_fock(&one, 0, 0.0).unwrap();
        assert!((out.rho[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((out.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_is_preserved() {
        let s = build_tmsv_fock(0.6, 12).unwrap();
        let out = apply_loss_fock(&apply_loss_fock(&s, 0, 0.7).unwrap(), 1, 0.4).unwrap();
        assert!((out.trace() - s.trace()).abs() < 1e-12);
    }

    #[test]
    fn attenuated_number_state_moments() {
        // ⟨n⟩ = |T|² after loss on |1⟩, so Γxx = 2⟨n⟩ + 1
        let one = FockKet::number(1, 4).unwrap().to_density();
        let out = apply_loss_fock(&one, 0, 0.3).unwrap();
        let m = covariance_from_fock(&out);
        assert!((m.gamma[(0, 0)] - 1.6).abs() < 1e-14);
    }
}
