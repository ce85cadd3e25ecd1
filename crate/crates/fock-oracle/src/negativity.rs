use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::state::FockState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockNegativity {
    pub e_n: f64,
    /// `‖ρ^{T_B}‖₁`.
    pub trace_norm: f64,
    /// Population at the cutoff; large values mean the result is truncation-dominated.
    pub boundary_population: f64,
}

/// `E_N = log ‖ρ^{T_B}‖₁` with `ρ^{T_B}[(a,b),(a′,b′)] = ρ[(a,b′),(a′,b)]`.
pub fn log_negativity_fock(state: &FockState, base: LogBase) -> Result<FockNegativity> {
    if state.modes != 2 {
        return Err(FockError::Dimension(format!("bipartite two-mode state required, got {} mode(s)", state.modes)));
    }
    let d = state.cutoff + 1;
    let dim = state.dim();
    let pt = DMatrix::from_fn(dim, dim, |i, j| {
        let (a, b) = (i / d, i % d);
        let (a2, b2) = (j / d, j % d);
        state.rho[(a * d + b2, a2 * d + b)]
    });
    let trace_norm: f64 = if pt.iter().all(|z| z.im == 0.0) {
        let re = pt.map(|z| z.re);
        SymmetricEigen::new((&re + re.transpose()) * 0.5).eigenvalues.iter().map(|e| e.abs()).sum()
    } else {
        let herm = (&pt + pt.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().map(|e| e.abs()).sum()
    };
    let nats = trace_norm.ln();
    let e_n = match base {
        LogBase::Natural => nats,
        LogBase::Two => nats / std::f64::consts::LN_2,
    };
    Ok(FockNegativity { e_n: e_n.max(0.0), trace_norm, boundary_population: state.boundary_population() })
}
