use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::state::{digits, FockState};

/// Harmonic-oscillator eigenfunctions `ψₙ(X)` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureTable {
    pub grid: Vec<f64>,
    /// `values[(n, j)] = ψₙ(grid[j])`.
    pub values: DMatrix<f64>,
}

impl QuadratureTable {
    /// Builds the table with the two-term recurrence
    /// `ψ_{n+1} = √(2/(n+1)) X ψₙ − √(n/(n+1)) ψ_{n−1}`.
    pub fn new(cutoff: usize, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 3 || !(hi > lo) {
            return Err(FockError::InvalidParameter(format!("bad grid [{lo}, {hi}] with {points} points")));
        }
        let dx = (hi - lo) / (points - 1) as f64;
        let grid: Vec<f64> = (0..points).map(|j| lo + dx * j as f64).collect();
        let mut values = DMatrix::zeros(cutoff + 1, points);
        let norm = std::f64::consts::PI.powf(-0.25);
        for (j, &x) in grid.iter().enumerate() {
            let mut prev = 0.0;
            let mut cur = norm * (-0.5 * x * x).exp();
            values[(0, j)] = cur;
            for n in 0..cutoff {
                let nf = n as f64;
                let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
                values[(n + 1, j)] = cur;
            }
        }
        Ok(Self { grid, values })
    }

    /// Default grid `[−10, 10]` with 1001 points.
    pub fn standard(cutoff: usize) -> Self {
        Self::new(cutoff, -10.0, 10.0, 1001).expect("valid default grid")
    }

    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let last = self.grid.len() - 1;
        (0..=last).map(|j| if j == 0 || j == last { 0.5 * h } else { h }).collect()
    }

    pub fn cutoff(&self) -> usize {
        self.values.nrows() - 1
    }

    /// Largest deviation of `∫ψₘψₙ` from `δₘₙ`.
    pub fn orthonormality_error(&self) -> f64 {
        let w = nalgebra::DVector::from_vec(self.weights());
        let weighted = DMatrix::from_fn(self.values.nrows(), self.values.ncols(), |n, j| self.values[(n, j)] * w[j]);
        let gram = &weighted * self.values.transpose();
        (gram - DMatrix::identity(self.values.nrows(), self.values.nrows())).amax()
    }

    /// `⟨X,φ|n⟩ = e^{−inφ} ψₙ(X)` at grid point `j`.
    fn bra(&self, j: usize, phi: f64) -> Vec<Complex64> {
        (0..self.values.nrows())
            .map(|n| Complex64::from_polar(self.values[(n, j)], -(n as f64) * phi))
            .collect()
    }
}

/// `ψₙ(x)` at an arbitrary point, by the same recurrence.
pub(crate) fn wavefunctions_at(x: f64, cutoff: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(cur);
    for n in 0..cutoff {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Outcome density of a quadrature measurement on one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneDistribution {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    /// `∫ p(X) dX` on the grid.
    pub integral: f64,
}

/// `p(X) = ⟨X,φ|ρ_mode|X,φ⟩` on the table's grid. `φ = 0` measures `x`,
/// `φ = π/2` measures `p`.
///
/// Fails when the density does not integrate to the state's trace within 1e−4.
pub fn homodyne_povm_fock(state: &FockState, mode: usize, phi: f64, table: &QuadratureTable) -> Result<HomodyneDistribution> {
    if table.cutoff() < state.cutoff {
        return Err(FockError::Dimension("wavefunction table is shorter than the state cutoff".into()));
    }
    let reduced = if state.modes == 1 { state.clone() } else { state.partial_trace(&[mode])? };
    let d = state.cutoff + 1;
    let density: Vec<f64> = (0..table.grid.len())
        .map(|j| {
            let bra = table.bra(j, phi);
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..d {
                for m in 0..d {
                    acc += bra[n] * reduced.rho[(n, m)] * bra[m].conj();
                }
            }
            acc.re
        })
        .collect();
    let integral: f64 = density.iter().zip(table.weights()).map(|(p, w)| p * w).sum();
    let expected = reduced.trace();
    if (integral - expected).abs() > 1e-4 {
        return Err(FockError::GridTooCoarse { integral, expected });
    }
    Ok(HomodyneDistribution { grid: table.grid.clone(), density, integral })
}

/// State of the remaining modes after finding outcome `x` for the quadrature
/// at angle `phi` on `mode`, normalized, together with the outcome density.
pub fn conditional_state(state: &FockState, mode: usize, phi: f64, x: f64) -> Result<(FockState, f64)> {
    if mode >= state.modes || state.modes < 2 {
        return Err(FockError::Dimension(format!("cannot condition mode {mode} of a {}-mode state", state.modes)));
    }
    let d = state.cutoff + 1;
    let psi = wavefunctions_at(x, state.cutoff);
    let bra: Vec<Complex64> = (0..d).map(|n| Complex64::from_polar(psi[n], -(n as f64) * phi)).collect();
    let rest: Vec<usize> = (0..state.modes).filter(|&k| k != mode).collect();
    let dr = d.pow(rest.len() as u32);
    let full = |r: usize, n: usize| {
        let rd = digits(r, rest.len(), d);
        let mut ns = vec![0; state.modes];
        rest.iter().zip(&rd).for_each(|(&m, &v)| ns[m] = v);
        ns[mode] = n;
        ns.iter().fold(0, |acc, &v| acc * d + v)
    };
    let idx: Vec<Vec<usize>> = (0..dr).map(|r| (0..d).map(|n| full(r, n)).collect()).collect();
    let mut out = DMatrix::from_element(dr, dr, Complex64::new(0.0, 0.0));
    for r in 0..dr {
        for c in 0..dr {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..d {
                for m in 0..d {
                    acc += bra[n] * state.rho[(idx[r][n], idx[c][m])] * bra[m].conj();
                }
            }
            out[(r, c)] = acc;
        }
    }
    let p: f64 = out.diagonal().iter().map(|z| z.re).sum();
    if p > 0.0 {
        out /= Complex64::new(p, 0.0);
    }
    Ok((FockState { modes: rest.len(), cutoff: state.cutoff, rho: out, truncation_weight: state.truncation_weight }, p))
}
