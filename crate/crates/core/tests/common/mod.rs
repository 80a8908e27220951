#![allow(dead_code)]

use num_complex::Complex64;
use quadsuite::fock::{CMatrix, TruncatedState};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Pure state with Gaussian random amplitudes on the first `support` levels.
pub fn random_pure_state(rng: &mut impl Rng, support: usize, dim: usize) -> TruncatedState {
    let coeffs: Vec<Complex64> = (0..support).map(|_| complex_gaussian(rng)).collect();
    TruncatedState::pure(&coeffs, dim).expect("non-zero amplitudes")
}

/// Mixed state `G G^* / tr(G G^*)` for a Ginibre matrix `G`.
pub fn random_mixed_state(rng: &mut impl Rng, dim: usize) -> TruncatedState {
    let g = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    for n in 0..dim {
        m[(n, n)].im = 0.0;
        for k in 0..n {
            let avg = 0.5 * (m[(n, k)] + m[(k, n)].conj());
            m[(n, k)] = avg;
            m[(k, n)] = avg.conj();
        }
    }
    TruncatedState::from_matrix(m).expect("Ginibre states are valid")
}
