mod common;

use common::*;
use gaussq::measurement::{homodyne_condition, Quadrature};
use gaussq::states::GaussianState;
use gaussq::symplectic::sigma;
use gaussq::teleportation::{receiver_covariance_explicit, teleport, TeleportSetup};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;

fn random_setup(seed: u64, max_zeta: f64) -> TeleportSetup {
    let mut r = rng(seed);
    let gin = random_physical(&mut r, 1, 1.0, 1.0);
    let zeta = r.random_range(0.0..max_zeta);
    TeleportSetup::new(gin, zeta, random_fiber(&mut r, 0.2, 1.0), random_fiber(&mut r, 0.2, 1.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn explicit_and_generic_paths_agree(seed in any::<u64>()) {
        let setup = random_setup(seed, 3.0);
        let r = teleport(&setup).unwrap();
        prop_assert!(r.path_discrepancy() <= 1e-10);
        let explicit = receiver_covariance_explicit(&setup).unwrap();
        prop_assert!(max_abs(&(explicit.as_matrix() - r.gamma_rec.as_matrix())) <= 1e-10);
    }

    #[test]
    fn receiver_covariance_ignores_outcome(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let setup = random_setup(seed, 2.0);
        let st = GaussianState::centered(setup.tripartite_covariance().unwrap()).unwrap();
        let measured = [(0, Quadrature::X), (1, Quadrature::P)];
        let (s1, _) = homodyne_condition(&st, &measured, &DVector::from_column_slice(&[a, b])).unwrap();
        let (s2, _) = homodyne_condition(&st, &measured, &DVector::from_column_slice(&[b, -a])).unwrap();
        prop_assert_eq!(s1.gamma(), s2.gamma());
    }

    #[test]
    fn fidelity_grows_with_squeezing(eta in 0.01f64..2.0) {
        let gin = GaussianState::squeezed_signal(eta).gamma().clone();
        let mut last = 0.0;
        for k in 0..=30 {
            let f = teleport(&TeleportSetup::ideal(gin.clone(), 0.1 * k as f64).unwrap()).unwrap().fidelity_zero_mean;
            prop_assert!(f > last);
            last = f;
        }
    }

    #[test]
    fn ideal_gain_is_sigma(seed in any::<u64>()) {
        let gin = random_physical(&mut rng(seed), 1, 1.0, 1.0);
        let r = teleport(&TeleportSetup::ideal(gin, 20.0).unwrap()).unwrap();
        prop_assert!(max_abs(&(r.gain - sigma(1))) <= 1e-6);
    }
}
