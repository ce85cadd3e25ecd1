mod common;

use common::*;
use rand::Rng;
use gaussq::states::{characteristic_function, classicality_test, max_classical_squeezing, GaussianState};
use gaussq::symplectic::{apply_symplectic, build_symplectic, symplectic_eigenvalues, Gate};
use nalgebra::DVector;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn characteristic_function_bounded(seed in any::<u64>(), modes in 1usize..=3, scale in 0.0f64..4.0) {
        let mut r = rng(seed);
        let kappa = DVector::from_fn(2 * modes, |_, _| r.random_range(-2.0..2.0));
        let st = GaussianState::centered(random_physical(&mut r, modes, 1.0, 1.0)).unwrap().displaced(kappa).unwrap();
        let lambda: Vec<f64> = (0..2 * modes).map(|_| scale * r.random_range(-1.0..1.0)).collect();
        prop_assert!(characteristic_function(&st, &lambda).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn classicality_ignores_phase_rotations(seed in any::<u64>(), angle in -3.2f64..3.2) {
        let mut r = rng(seed);
        let g = random_physical(&mut r, 1, 1.0, 1.0);
        let rot = build_symplectic(&[Gate::PhaseRotation { mode: 0, angle }], 1).unwrap();
        let turned = apply_symplectic(&GaussianState::centered(g.clone()).unwrap(), &rot).unwrap();
        let (a, b) = (classicality_test(&g, 1e-9).unwrap(), classicality_test(turned.gamma(), 1e-9).unwrap());
        prop_assert!((a.min_gamma_eigenvalue - b.min_gamma_eigenvalue).abs() <= 1e-9);
        if (a.min_gamma_eigenvalue - 1.0).abs() > 1e-8 {
            prop_assert_eq!(a.classical, b.classical);
        }
    }

    #[test]
    fn squeezed_thermal_boundary(n in 0.0f64..3.0, frac in 0.0f64..2.0) {
        let limit = max_classical_squeezing(n).unwrap();
        let zeta = frac * limit;
        let th = GaussianState::thermal(&[n]).unwrap();
        let sq = build_symplectic(&[Gate::Squeeze { mode: 0, zeta }], 1).unwrap();
        let v = classicality_test(apply_symplectic(&th, &sq).unwrap().gamma(), 1e-9).unwrap();
        if (zeta - limit).abs() > 1e-9 {
            prop_assert_eq!(v.classical, zeta < limit);
        }
        // the eigenvalue crosses one exactly at the limit
        let at = apply_symplectic(&th, &build_symplectic(&[Gate::Squeeze { mode: 0, zeta: limit }], 1).unwrap()).unwrap();
        prop_assert!((classicality_test(at.gamma(), 1e-9).unwrap().min_gamma_eigenvalue - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn tmsv_is_pure(zeta in -3.0f64..3.0) {
        for nu in symplectic_eigenvalues(GaussianState::tmsv(zeta).gamma()) {
            prop_assert!((nu - 1.0).abs() <= 1e-10 * (2.0 * zeta).cosh().max(1.0));
        }
    }
}
