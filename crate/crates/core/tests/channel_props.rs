mod common;

use common::*;
use rand::Rng;
use gaussq::channels::{apply_channel, fiber_channel, validate_channel, FiberParams};
use gaussq::states::GaussianState;
use gaussq::symplectic::validate_covariance;
use nalgebra::DVector;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn valid_channels_keep_states_physical(seed in any::<u64>(), modes in 1usize..=3) {
        let mut r = rng(seed);
        let ch = random_channel(&mut r, modes);
        prop_assert!(validate_channel(&ch, 1e-9));
        let st = GaussianState::centered(random_physical(&mut r, modes, 1.0, 1.0)).unwrap();
        prop_assert!(validate_covariance(apply_channel(&st, &ch).unwrap().gamma(), 1e-9).physical);
    }

    #[test]
    fn lossless_fiber_is_identity(seed in any::<u64>(), n_th in 0.0f64..3.0) {
        let mut r = rng(seed);
        let ch = fiber_channel(&FiberParams::new(1.0, 0.0, 0.0, n_th).unwrap()).unwrap();
        let kappa = DVector::from_fn(2, |_, _| r.random_range(-1.0..1.0));
        let st = GaussianState::centered(random_physical(&mut r, 1, 1.0, 1.0)).unwrap().displaced(kappa).unwrap();
        let out = apply_channel(&st, &ch).unwrap();
        prop_assert!(max_abs(&(out.gamma().as_matrix() - st.gamma().as_matrix())) <= 1e-14);
        prop_assert!((out.kappa() - st.kappa()).amax() <= 1e-14);
    }

    #[test]
    fn composition_matches_sequential_application(seed in any::<u64>(), modes in 1usize..=3) {
        let mut r = rng(seed);
        let (first, second) = (random_channel(&mut r, modes), random_channel(&mut r, modes));
        let kappa = DVector::from_fn(2 * modes, |_, _| r.random_range(-1.0..1.0));
        let st = GaussianState::centered(random_physical(&mut r, modes, 0.8, 1.0)).unwrap().displaced(kappa).unwrap();
        let stepwise = apply_channel(&apply_channel(&st, &first).unwrap(), &second).unwrap();
        let joint = apply_channel(&st, &second.after(&first).unwrap()).unwrap();
        let scale = max_abs(stepwise.gamma().as_matrix()).max(1.0);
        prop_assert!(max_abs(&(stepwise.gamma().as_matrix() - joint.gamma().as_matrix())) <= 1e-10 * scale);
        prop_assert!((stepwise.kappa() - joint.kappa()).amax() <= 1e-10 * scale);
    }
}
