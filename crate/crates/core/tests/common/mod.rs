#![allow(dead_code)]

use gaussq::channels::{fiber_channel, FiberParams, GaussianChannel};
use gaussq::symplectic::{build_symplectic, CovarianceMatrix, Gate, SymplecticMatrix};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Three layers of phase rotations, squeezers and beamsplitters.
pub fn random_gates(rng: &mut TestRng, modes: usize, max_squeeze: f64) -> Vec<Gate> {
    let mut gates = Vec::new();
    for _ in 0..3 {
        for mode in 0..modes {
            gates.push(Gate::PhaseRotation { mode, angle: rng.random_range(-PI..PI) });
            gates.push(Gate::Squeeze { mode, zeta: rng.random_range(-max_squeeze..max_squeeze) });
        }
        if modes > 1 {
            let first = rng.random_range(0..modes);
            let mut second = rng.random_range(0..modes - 1);
            if second >= first {
                second += 1;
            }
            gates.push(Gate::BeamSplitter { first, second });
        }
    }
    gates
}

pub fn random_symplectic(rng: &mut TestRng, modes: usize, max_squeeze: f64) -> SymplecticMatrix {
    build_symplectic(&random_gates(rng, modes, max_squeeze), modes).unwrap()
}

pub fn random_thermal(rng: &mut TestRng, modes: usize, max_n: f64) -> CovarianceMatrix {
    let diag: Vec<f64> = (0..modes).flat_map(|_| {
        let v = 2.0 * rng.random_range(0.0..max_n) + 1.0;
        [v, v]
    }).collect();
    CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))).unwrap()
}

/// `S Γ_th Sᵀ` for a random symplectic `S` and random thermal `Γ_th`.
pub fn random_physical(rng: &mut TestRng, modes: usize, max_squeeze: f64, max_n: f64) -> CovarianceMatrix {
    let s = random_symplectic(rng, modes, max_squeeze);
    let th = random_thermal(rng, modes, max_n);
    CovarianceMatrix::new(s.as_matrix() * th.as_matrix() * s.as_matrix().transpose()).unwrap()
}

pub fn random_fiber(rng: &mut TestRng, min_t: f64, max_n: f64) -> FiberParams {
    let t_mag: f64 = rng.random_range(min_t..1.0);
    let r_max = (1.0 - t_mag * t_mag).sqrt();
    let r_mag = rng.random_range(0.0..1.0) * r_max;
    FiberParams::new(t_mag, rng.random_range(-PI..PI), r_mag, rng.random_range(0.0..max_n)).unwrap()
}

/// A random valid channel: fibers on every mode, then a random symplectic, then extra noise.
pub fn random_channel(rng: &mut TestRng, modes: usize) -> GaussianChannel {
    let mut fibers = fiber_channel(&random_fiber(rng, 0.0, 1.0)).unwrap();
    for _ in 1..modes {
        fibers = fibers.direct_sum(&fiber_channel(&random_fiber(rng, 0.0, 1.0)).unwrap());
    }
    let s = random_symplectic(rng, modes, 0.8).into_matrix();
    let unitary = GaussianChannel::new(s, DMatrix::zeros(2 * modes, 2 * modes)).unwrap();
    let b = DMatrix::from_fn(2 * modes, 2 * modes, |_, _| rng.random_range(-0.5..0.5));
    let noise = GaussianChannel::new(DMatrix::identity(2 * modes, 2 * modes), &b * b.transpose()).unwrap();
    noise.after(&unitary.after(&fibers).unwrap()).unwrap()
}

/// Random symmetric `n×n` matrix of the given rank.
pub fn random_rank_deficient(rng: &mut TestRng, n: usize, rank: usize) -> DMatrix<f64> {
    let q = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0)).qr().q();
    let q = q.columns(0, rank).into_owned();
    let spectrum = nalgebra::DVector::from_fn(rank, |_, _| {
        let e = rng.random_range(0.2..3.0);
        if rng.random_bool(0.5) { e } else { -e }
    });
    &q * DMatrix::from_diagonal(&spectrum) * q.transpose()
}

/// Diagonal of a physical projection reference: `d₁d₂ ≥ 1` on every mode.
pub fn random_reference(rng: &mut TestRng, modes: usize) -> nalgebra::DVector<f64> {
    let mut d = nalgebra::DVector::zeros(2 * modes);
    for k in 0..modes {
        let r: f64 = rng.random_range(-1.5..1.5);
        let noise = (1.0 + rng.random_range(0.0..1.0f64)).sqrt();
        d[2 * k] = noise * r.exp();
        d[2 * k + 1] = noise * (-r).exp();
    }
    d
}
