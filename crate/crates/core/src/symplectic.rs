//! Phase-space linear algebra: the symplectic form, covariance matrices,
//! symplectic gates, the Euler decomposition and symplectic spectra.
//!
//! Quadratures are ordered `(x₁, p₁, …, x_N, p_N)` and the vacuum covariance
//! matrix is the identity.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_even_square, max_abs, min_eig_hermitian, rotation, sorted_eigen_desc,
    sorted_eigenvalues, sqrt_psd, symmetrize,
};
use crate::states::GaussianState;
use crate::DEFAULT_TOL;

/// The block-diagonal symplectic form `Σ = [[0, 1], [−1, 0]]^{⊕N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let mut matrix = DMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { modes, matrix }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

/// Shorthand for `SymplecticForm::new(modes).into_matrix()`.
pub fn sigma(modes: usize) -> DMatrix<f64> {
    SymplecticForm::new(modes).into_matrix()
}

/// A real symmetric `2N×2N` matrix of second moments.
///
/// Construction symmetrizes the input; physicality is a separate question
/// answered by [`validate_covariance`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    pub fn new(gamma: DMatrix<f64>) -> Result<Self> {
        ensure_even_square(&gamma, "covariance matrix")?;
        Ok(Self(symmetrize(&gamma)))
    }

    pub fn from_row_slice(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, data))
    }

    pub fn identity(modes: usize) -> Self {
        Self(DMatrix::identity(2 * modes, 2 * modes))
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// The `2×2` block of a single mode.
    pub fn mode_block(&self, mode: usize) -> Result<DMatrix<f64>> {
        if mode >= self.modes() {
            return Err(Error::ModeOutOfRange { index: mode, modes: self.modes() });
        }
        Ok(self.0.view((2 * mode, 2 * mode), (2, 2)).into_owned())
    }

    pub fn direct_sum(&self, other: &CovarianceMatrix) -> CovarianceMatrix {
        CovarianceMatrix(crate::linalg::direct_sum(&self.0, &other.0))
    }

    pub fn determinant(&self) -> f64 {
        if self.0.nrows() == 0 {
            return 1.0;
        }
        self.0.clone().determinant()
    }

    pub(crate) fn from_symmetric_unchecked(gamma: DMatrix<f64>) -> Self {
        Self(gamma)
    }
}

/// Outcome of the uncertainty-relation test `Γ + iΣ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub physical: bool,
    pub min_eigenvalue: f64,
}

/// Checks `Γ + iΣ ≥ 0`.
///
/// The tolerance is relative to the largest entry of `Γ` once that exceeds 1,
/// since eigenvalue round-off grows with the matrix norm.
pub fn validate_covariance(gamma: &CovarianceMatrix, tol: f64) -> ValidityReport {
    let sig = sigma(gamma.modes());
    let min_eigenvalue = min_eig_hermitian(gamma.as_matrix(), &sig);
    let scale = max_abs(gamma.as_matrix()).max(1.0);
    ValidityReport { physical: min_eigenvalue >= -tol * scale, min_eigenvalue }
}

pub(crate) fn require_physical(gamma: &CovarianceMatrix) -> Result<()> {
    let report = validate_covariance(gamma, DEFAULT_TOL);
    if report.physical {
        Ok(())
    } else {
        Err(Error::Unphysical { min_eigenvalue: report.min_eigenvalue })
    }
}

/// Largest entry of `SΣSᵀ − Σ`.
pub fn symplectic_deviation(s: &DMatrix<f64>) -> Result<f64> {
    let modes = ensure_even_square(s, "symplectic matrix")?;
    let sig = sigma(modes);
    Ok(max_abs(&(s * &sig * s.transpose() - &sig)))
}

/// True iff `‖SΣSᵀ − Σ‖_max ≤ tol`.
pub fn check_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(symplectic_deviation(s)? <= tol)
}

/// A real matrix preserving the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(DMatrix<f64>);

impl SymplecticMatrix {
    /// Accepts `s` if it is symplectic to within `tol`.
    pub fn new(s: DMatrix<f64>, tol: f64) -> Result<Self> {
        let deviation = symplectic_deviation(&s)?;
        if deviation > tol {
            return Err(Error::NotSymplectic { deviation });
        }
        Ok(Self(s))
    }

    pub fn identity(modes: usize) -> Self {
        Self(DMatrix::identity(2 * modes, 2 * modes))
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn inverse(&self) -> SymplecticMatrix {
        // S⁻¹ = −Σ Sᵀ Σ
        let sig = sigma(self.modes());
        SymplecticMatrix(-(&sig * self.0.transpose() * &sig))
    }

    pub fn compose(&self, then: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix(&then.0 * &self.0)
    }

    pub fn direct_sum(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix(crate::linalg::direct_sum(&self.0, &other.0))
    }
}

/// Elementary symplectic generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Rotation `[[cos θ, −sin θ], [sin θ, cos θ]]` on one mode.
    PhaseRotation { mode: usize, angle: f64 },
    /// `diag(e^ζ, e^−ζ)` on one mode.
    Squeeze { mode: usize, zeta: f64 },
    /// Symmetric beam splitter `(1/√2)[[1, 1], [−1, 1]] ⊗ 1₂` on two modes.
    BeamSplitter { first: usize, second: usize },
}

impl Gate {
    fn check(&self, modes: usize) -> Result<()> {
        let out = |index| Err(Error::ModeOutOfRange { index, modes });
        match *self {
            Gate::PhaseRotation { mode, .. } | Gate::Squeeze { mode, .. } if mode >= modes => out(mode),
            Gate::BeamSplitter { first, .. } if first >= modes => out(first),
            Gate::BeamSplitter { second, .. } if second >= modes => out(second),
            Gate::BeamSplitter { first, second } if first == second => Err(Error::InvalidParameter(
                "beam splitter needs two distinct modes".into(),
            )),
            Gate::Squeeze { zeta, .. } if !zeta.is_finite() => {
                Err(Error::InvalidParameter(format!("squeezing parameter {zeta} is not finite")))
            }
            Gate::PhaseRotation { angle, .. } if !angle.is_finite() => {
                Err(Error::InvalidParameter(format!("rotation angle {angle} is not finite")))
            }
            _ => Ok(()),
        }
    }

    /// The full `2N×2N` matrix of this gate.
    pub fn matrix(&self, modes: usize) -> Result<DMatrix<f64>> {
        self.check(modes)?;
        let mut s = DMatrix::identity(2 * modes, 2 * modes);
        match *self {
            Gate::PhaseRotation { mode, angle } => {
                s.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(&rotation(angle));
            }
            Gate::Squeeze { mode, zeta } => {
                s[(2 * mode, 2 * mode)] = zeta.exp();
                s[(2 * mode + 1, 2 * mode + 1)] = (-zeta).exp();
            }
            Gate::BeamSplitter { first, second } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                for q in 0..2 {
                    let (i, j) = (2 * first + q, 2 * second + q);
                    s[(i, i)] = h;
                    s[(i, j)] = h;
                    s[(j, i)] = -h;
                    s[(j, j)] = h;
                }
            }
        }
        Ok(s)
    }
}

/// Ordered product `G₀·G₁·…` of the gate matrices; the leftmost gate acts last.
pub fn build_symplectic(gates: &[Gate], modes: usize) -> Result<SymplecticMatrix> {
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    for gate in gates {
        s *= gate.matrix(modes)?;
    }
    Ok(SymplecticMatrix(s))
}

/// `Γ → SΓSᵀ`, `κ → Sκ`.
pub fn apply_symplectic(state: &GaussianState, s: &SymplecticMatrix) -> Result<GaussianState> {
    if state.modes() != s.modes() {
        return Err(Error::Dimension(format!(
            "state has {} mode(s), symplectic matrix acts on {}",
            state.modes(),
            s.modes()
        )));
    }
    let sm = s.as_matrix();
    let gamma = symmetrize(&(sm * state.gamma().as_matrix() * sm.transpose()));
    let kappa: DVector<f64> = sm * state.kappa();
    Ok(GaussianState::from_parts_unchecked(kappa, CovarianceMatrix(gamma)))
}

/// `S = O₁·D·O₂` with orthogonal symplectic `O₁`, `O₂` and
/// `D = diag(k₁, 1/k₁, …, k_N, 1/k_N)`, `k_i ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerDecomposition {
    pub left: DMatrix<f64>,
    pub squeezing: Vec<f64>,
    pub right: DMatrix<f64>,
}

impl EulerDecomposition {
    pub fn diagonal(&self) -> DMatrix<f64> {
        let n = self.squeezing.len();
        let mut d = DMatrix::zeros(2 * n, 2 * n);
        for (i, k) in self.squeezing.iter().enumerate() {
            d[(2 * i, 2 * i)] = *k;
            d[(2 * i + 1, 2 * i + 1)] = 1.0 / k;
        }
        d
    }

    pub fn recompose(&self) -> DMatrix<f64> {
        &self.left * self.diagonal() * &self.right
    }
}

/// Euler (Bloch–Messiah) decomposition of a symplectic matrix.
///
/// `SᵀS` is diagonalized by an orthogonal symplectic `U` built from its
/// eigenvectors: an eigenvector `v` with eigenvalue `k² > 1` is paired with
/// `Σᵀv` (eigenvalue `1/k²`); the eigenvalue-one subspace is Σ-invariant and
/// gets a symplectic Gram–Schmidt basis. Then `O₂ = Uᵀ` and `O₁ = S·U·D⁻¹`.
pub fn euler_decompose(s: &SymplecticMatrix) -> Result<EulerDecomposition> {
    let n = s.modes();
    let sm = s.as_matrix();
    let sig = sigma(n);
    let gram = symmetrize(&(sm.transpose() * sm));
    let (values, vectors) = sorted_eigen_desc(&gram);

    let threshold = 1e-11 * values.first().copied().unwrap_or(1.0).max(1.0);
    let squeezed = (0..n).take_while(|&i| values[i] > 1.0 + threshold).count();

    let mut u = DMatrix::zeros(2 * n, 2 * n);
    let mut ks = vec![1.0; n];
    for i in 0..squeezed {
        let v = vectors.column(i).into_owned();
        let w = sig.transpose() * &v;
        u.set_column(2 * i, &v);
        u.set_column(2 * i + 1, &w);
        ks[i] = values[i].sqrt();
    }

    // Symplectic Gram–Schmidt on the (numerically) unit-eigenvalue subspace.
    let mut pool: Vec<DVector<f64>> =
        (squeezed..2 * n - squeezed).map(|i| vectors.column(i).into_owned()).collect();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for i in squeezed..n {
        let v = loop {
            let mut cand = pool.pop().ok_or({
                Error::NotSymplectic { deviation: f64::NAN }
            })?;
            for b in &basis {
                let proj = b.dot(&cand);
                cand -= b * proj;
            }
            let norm = cand.norm();
            if norm > 1e-6 {
                break cand / norm;
            }
        };
        let w = sig.transpose() * &v;
        u.set_column(2 * i, &v);
        u.set_column(2 * i + 1, &w);
        basis.push(v);
        basis.push(w);
    }

    let d_inv = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        if r != c {
            0.0
        } else if r % 2 == 0 {
            1.0 / ks[r / 2]
        } else {
            ks[r / 2]
        }
    });
    let left = sm * &u * d_inv;
    Ok(EulerDecomposition { left, squeezing: ks, right: u.transpose() })
}

/// Symplectic eigenvalues of `Γ`: the moduli of the eigenvalues of `iΣΓ`,
/// one per mode, ascending.
pub fn symplectic_eigenvalues(gamma: &CovarianceMatrix) -> Vec<f64> {
    let n = gamma.modes();
    if n == 0 {
        return Vec::new();
    }
    let g = gamma.as_matrix();
    let sig = sigma(n);
    let spectrum = sorted_eigenvalues(g);

    let moduli: Vec<f64> = if spectrum[0] > 0.0 {
        // Γ^{1/2} Σ Γ^{1/2} is antisymmetric with eigenvalues ±iν; its Gram
        // matrix carries each ν² twice.
        let root = sqrt_psd(g);
        let a = &root * &sig * &root;
        sorted_eigenvalues(&(a.transpose() * &a)).into_iter().map(|v| v.max(0.0).sqrt()).collect()
    } else {
        let mut m: Vec<f64> = (&sig * g).complex_eigenvalues().iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m
    };
    moduli.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::GaussianState;

    fn assert_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) {
        let d = max_abs(&(a - b));
        assert!(d <= tol, "matrices differ by {d:e}\n{a}\n{b}");
    }

    #[test]
    fn symplectic_form_invariants() {
        for n in 1..4 {
            let s = sigma(n);
            assert_close(&s.transpose(), &(-&s), 0.0);
            assert_close(&(&s * &s), &(-DMatrix::identity(2 * n, 2 * n)), 0.0);
            assert!((s.clone().determinant() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn vacuum_saturates_uncertainty() {
        let r = validate_covariance(&CovarianceMatrix::identity(1), 1e-9);
        assert!(r.physical);
        assert!(r.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn sub_vacuum_noise_is_unphysical() {
        let g = CovarianceMatrix::from_row_slice(2, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        let r = validate_covariance(&g, 1e-9);
        assert!(!r.physical);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
    }

    #[test]
    fn tmsv_is_pure() {
        let g = GaussianState::tmsv(0.5).gamma().clone();
        let r = validate_covariance(&g, 1e-9);
        assert!(r.physical);
        assert!(r.min_eigenvalue.abs() < 1e-12);
        for nu in symplectic_eigenvalues(&g) {
            assert!((nu - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn odd_or_rectangular_inputs_are_rejected() {
        assert!(matches!(CovarianceMatrix::new(DMatrix::identity(3, 3)), Err(Error::Dimension(_))));
        assert!(matches!(CovarianceMatrix::new(DMatrix::zeros(2, 4)), Err(Error::Dimension(_))));
        assert!(matches!(check_symplectic(&DMatrix::identity(3, 3), 1e-9), Err(Error::Dimension(_))));
    }

    #[test]
    fn symplectic_checks() {
        assert!(check_symplectic(&DMatrix::identity(4, 4), 1e-9).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        #[rustfmt::skip]
        let bs = DMatrix::from_row_slice(4, 4, &[
             h, 0.0,   h, 0.0,
            0.0,  h, 0.0,   h,
            -h, 0.0,   h, 0.0,
            0.0, -h, 0.0,   h,
        ]);
        assert!(check_symplectic(&bs, 1e-12).unwrap());
        assert!(!check_symplectic(&DMatrix::from_diagonal_element(2, 2, 2.0), 1e-9).unwrap());
        assert!(matches!(
            SymplecticMatrix::new(DMatrix::from_diagonal_element(2, 2, 2.0), 1e-9),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn gate_products() {
        let z = 0.7;
        let sq = build_symplectic(&[Gate::Squeeze { mode: 0, zeta: z }], 1).unwrap();
        assert_close(
            sq.as_matrix(),
            &DMatrix::from_row_slice(2, 2, &[z.exp(), 0.0, 0.0, (-z).exp()]),
            1e-15,
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bs = build_symplectic(&[Gate::BeamSplitter { first: 0, second: 1 }], 2).unwrap();
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
             h, 0.0,   h, 0.0,
            0.0,  h, 0.0,   h,
            -h, 0.0,   h, 0.0,
            0.0, -h, 0.0,   h,
        ]);
        assert_close(bs.as_matrix(), &expected, 0.0);
        assert_close(build_symplectic(&[], 3).unwrap().as_matrix(), &DMatrix::identity(6, 6), 0.0);
        assert!(matches!(
            build_symplectic(&[Gate::Squeeze { mode: 2, zeta: 0.1 }], 2),
            Err(Error::ModeOutOfRange { index: 2, modes: 2 })
        ));
    }

    #[test]
    fn leftmost_gate_acts_last() {
        let gates = [Gate::PhaseRotation { mode: 0, angle: 0.3 }, Gate::Squeeze { mode: 0, zeta: 0.4 }];
        let s = build_symplectic(&gates, 1).unwrap();
        let expected = gates[0].matrix(1).unwrap() * gates[1].matrix(1).unwrap();
        assert_close(s.as_matrix(), &expected, 1e-15);
    }

    #[test]
    fn squeezing_the_vacuum() {
        let s = build_symplectic(&[Gate::Squeeze { mode: 0, zeta: 0.5 }], 1).unwrap();
        let out = apply_symplectic(&GaussianState::vacuum(1), &s).unwrap();
        let e = std::f64::consts::E;
        assert_close(out.gamma().as_matrix(), &DMatrix::from_row_slice(2, 2, &[e, 0.0, 0.0, 1.0 / e]), 1e-14);
    }

    #[test]
    fn beamsplitter_leaves_two_vacua_alone() {
        let s = build_symplectic(&[Gate::BeamSplitter { first: 0, second: 1 }], 2).unwrap();
        let out = apply_symplectic(&GaussianState::vacuum(2), &s).unwrap();
        assert_close(out.gamma().as_matrix(), &DMatrix::identity(4, 4), 1e-15);
    }

    #[test]
    fn opposite_squeezers_then_beamsplitter_make_a_tmsv() {
        let z = 0.5;
        let s = build_symplectic(
            &[
                Gate::BeamSplitter { first: 0, second: 1 },
                Gate::Squeeze { mode: 0, zeta: -z },
                Gate::Squeeze { mode: 1, zeta: z },
            ],
            2,
        )
        .unwrap();
        let out = apply_symplectic(&GaussianState::vacuum(2), &s).unwrap();
        let (c, sh) = ((2.0 * z).cosh(), (2.0 * z).sinh());
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
              c, 0.0,  sh, 0.0,
            0.0,   c, 0.0, -sh,
             sh, 0.0,   c, 0.0,
            0.0, -sh, 0.0,   c,
        ]);
        assert_close(out.gamma().as_matrix(), &expected, 1e-13);
    }

    #[test]
    fn apply_rejects_mode_mismatch() {
        let s = SymplecticMatrix::identity(2);
        assert!(matches!(apply_symplectic(&GaussianState::vacuum(1), &s), Err(Error::Dimension(_))));
    }

    #[test]
    fn euler_of_pure_squeezer_and_rotation() {
        let e = std::f64::consts::E;
        let d = SymplecticMatrix::new(DMatrix::from_row_slice(2, 2, &[e, 0.0, 0.0, 1.0 / e]), 1e-12).unwrap();
        let dec = euler_decompose(&d).unwrap();
        assert!((dec.squeezing[0] - e).abs() < 1e-12);
        assert_close(&dec.recompose(), d.as_matrix(), 1e-12);
        assert_close(&dec.left.abs(), &DMatrix::identity(2, 2), 1e-12);

        let r = build_symplectic(&[Gate::PhaseRotation { mode: 0, angle: 1.1 }], 1).unwrap();
        let dec = euler_decompose(&r).unwrap();
        assert!((dec.squeezing[0] - 1.0).abs() < 1e-12);
        assert_close(&dec.recompose(), r.as_matrix(), 1e-12);
    }

    #[test]
    fn euler_of_degenerate_multimode_squeezer() {
        let s = build_symplectic(
            &[
                Gate::BeamSplitter { first: 0, second: 2 },
                Gate::Squeeze { mode: 0, zeta: 0.4 },
                Gate::Squeeze { mode: 2, zeta: 0.4 },
                Gate::PhaseRotation { mode: 1, angle: 0.2 },
            ],
            3,
        )
        .unwrap();
        let dec = euler_decompose(&s).unwrap();
        assert_close(&dec.recompose(), s.as_matrix(), 1e-12);
        for o in [&dec.left, &dec.right] {
            assert_close(&(o.transpose() * o), &DMatrix::identity(6, 6), 1e-10);
            assert!(check_symplectic(o, 1e-10).unwrap());
        }
        assert!(dec.squeezing.iter().all(|&k| k >= 1.0));
    }

    #[test]
    fn partial_transpose_spectrum_of_tmsv() {
        let g = GaussianState::tmsv(0.5).gamma().clone();
        let mut m = g.into_matrix();
        m.row_mut(3).neg_mut();
        m.column_mut(3).neg_mut();
        let nu = symplectic_eigenvalues(&CovarianceMatrix::new(m).unwrap());
        assert!((nu[0] - (-1.0f64).exp()).abs() < 1e-12);
        assert!((nu[1] - 1.0f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn symplectic_eigenvalues_of_non_positive_input_use_the_general_route() {
        let g = CovarianceMatrix::from_row_slice(2, &[2.0, 0.0, 0.0, -0.5]).unwrap();
        let nu = symplectic_eigenvalues(&g);
        assert_eq!(nu.len(), 1);
        assert!((nu[0] - 1.0).abs() < 1e-12);
    }
}
