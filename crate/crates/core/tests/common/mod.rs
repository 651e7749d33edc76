#![allow(dead_code)]

use entchain::chain::{BlockState, ConstraintMode};
use entchain::entanglement::{PureTwoQubit, TwoQubitState};
use entchain::linalg::ComplexMatrix;
use entchain::tightbinding::{lexicographic_basis, unmap_indices};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(r * t.cos(), r * t.sin())
}

pub fn random_unit_vector(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..len).map(|_| gaussian_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_pure(rng: &mut impl Rng) -> PureTwoQubit {
    let v = random_unit_vector(rng, 4);
    PureTwoQubit::new(v[0], v[1], v[2], v[3]).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    (&m + &m.adjoint()).scale_real(0.5)
}

/// Random mixed state of the given rank.
pub fn random_mixed(rng: &mut impl Rng, rank: usize) -> TwoQubitState {
    let mut acc = ComplexMatrix::zeros(4);
    let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let v = random_unit_vector(rng, 4);
        acc = &acc + &ComplexMatrix::outer(&v).scale_real(w / total);
    }
    TwoQubitState::new(acc).unwrap()
}

/// Every tuple allowed in a strict-mode block of `n` sites with `p` particles.
pub fn strict_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    lexicographic_basis(n - p, p)
        .iter()
        .map(|k| unmap_indices(k))
        .collect()
}

/// Strict-mode block state with random complex amplitudes on every allowed tuple.
pub fn random_strict_block(rng: &mut impl Rng, n: usize, p: usize) -> BlockState {
    let tuples = strict_tuples(n, p);
    let amps = random_unit_vector(rng, tuples.len());
    BlockState::new(n, p, tuples.into_iter().zip(amps), ConstraintMode::Strict).unwrap()
}

pub fn all_valid_np(n_max: usize) -> Vec<(usize, usize)> {
    (2..=n_max)
        .flat_map(|n| (0..=n / 2).map(move |p| (n, p)))
        .collect()
}

/// Random mixed state of random rank 1..=4.
pub fn random_state(rng: &mut impl Rng) -> TwoQubitState {
    let rank = rng.gen_range(1..=4);
    random_mixed(rng, rank)
}
