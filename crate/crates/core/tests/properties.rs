mod common;

use common::*;
use entchain::chain::{BlockState, ConstraintMode};
use entchain::entanglement::{
    concurrence, pure_concurrence, special_form_concurrence, spin_flip, wootters_lambdas,
    TwoQubitState,
};
use entchain::linalg::{
    hermitian_eigen, matrix_sqrt_psd, partial_trace_pair, tensor_product, ComplexMatrix,
};
use entchain::optimize::brute_force_optimize;
use entchain::tightbinding::{
    closed_form_concurrence, cosine_sum_concurrence, hopping_matrix, remap_indices,
    single_particle_energies, slater_ground_state, summed_concurrence, unmap_indices,
    ReducedLattice,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn eigen_reconstruction_and_orthonormality() {
    let mut rng = rng(1);
    for trial in 0..60 {
        let dim = 1 + trial % 16;
        let a = random_hermitian(&mut rng, dim);
        let eig = hermitian_eigen(&a).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-10);
        let v = &eig.eigenvectors;
        let vhv = &v.adjoint() * v;
        assert!(vhv.max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn sqrt_of_gram_matrices() {
    let mut rng = rng(2);
    for dim in 1..=8 {
        let m = ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(&mut rng));
        let psd = &m.adjoint() * &m;
        let s = matrix_sqrt_psd(&psd).unwrap();
        assert!((&s * &s).max_abs_diff(&psd) <= 1e-9);
        assert!(s.hermitian_deviation() <= 1e-12);
    }
}

proptest! {
    #[test]
    fn tensor_product_is_associative(
        seed in any::<u64>(),
        da in 1usize..4, db in 1usize..4, dc in 1usize..4,
    ) {
        let mut rng = rng(seed);
        let a = ComplexMatrix::from_fn(da, |_, _| gaussian_complex(&mut rng));
        let b = ComplexMatrix::from_fn(db, |_, _| gaussian_complex(&mut rng));
        let c = ComplexMatrix::from_fn(dc, |_, _| gaussian_complex(&mut rng));
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn pair_traces_are_density_matrices(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = rng(seed);
        let psi = random_unit_vector(&mut rng, 1 << n);
        for site in 1..n {
            let rho = partial_trace_pair(&psi, site).unwrap();
            let m = rho.matrix();
            prop_assert!(m.hermitian_deviation() <= 1e-12);
            prop_assert!((m.trace().re - 1.0).abs() <= 1e-10);
            prop_assert!(hermitian_eigen(m).unwrap().eigenvalues[3] >= -1e-10);
        }
    }

    #[test]
    fn remap_is_a_bijection(n in 2usize..14, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = rng.gen_range(0..=n / 2);
        let tuples = strict_tuples(n, p);
        let j = &tuples[rng.gen_range(0..tuples.len())];
        let k = remap_indices(j, n).unwrap();
        prop_assert!(k.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(k.iter().all(|&s| s >= 1 && s < n - p + 1));
        prop_assert_eq!(&unmap_indices(&k), j);
    }
}

#[test]
fn wootters_matches_pure_formula() {
    let mut rng = rng(3);
    for _ in 0..1000 {
        let psi = random_pure(&mut rng);
        let rho = TwoQubitState::from_pure(&psi);
        let c = concurrence(&rho).unwrap().concurrence;
        assert!((c - pure_concurrence(&psi)).abs() <= 1e-9);
    }
}

#[test]
fn concurrence_is_convex() {
    let mut rng = rng(4);
    for _ in 0..300 {
        let r1 = random_state(&mut rng);
        let r2 = random_state(&mut rng);
        let t: f64 = rng.gen();
        let mix = TwoQubitState::mixture(&[(t, &r1), (1.0 - t, &r2)]).unwrap();
        let c1 = concurrence(&r1).unwrap().concurrence;
        let c2 = concurrence(&r2).unwrap().concurrence;
        let cm = concurrence(&mix).unwrap().concurrence;
        assert!(cm <= t * c1 + (1.0 - t) * c2 + 1e-9);
    }
}

#[test]
fn spin_flip_is_an_involution() {
    let mut rng = rng(5);
    for _ in 0..300 {
        let rho = random_state(&mut rng);
        let once = TwoQubitState::new(spin_flip(&rho)).unwrap();
        assert!(spin_flip(&once).max_abs_diff(rho.matrix()) <= 1e-12);
    }
}

#[test]
fn wootters_values_are_nonnegative() {
    let mut rng = rng(6);
    for _ in 0..500 {
        let rho = random_state(&mut rng);
        let raw = wootters_lambdas(&rho).unwrap();
        assert!(raw.iter().all(|&l| l >= -1e-10), "{:?}", raw);
        assert!(raw.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn chain_pair_matrix_follows_template() {
    let mut rng = rng(7);
    for (n, p) in all_valid_np(10) {
        for _ in 0..3 {
            let xi = random_strict_block(&mut rng, n, p);
            let report = xi.pair_density_matrix().unwrap();
            let rho = report.rho.matrix();
            let nf = n as f64;
            let want = [(n - 2 * p) as f64 / nf, p as f64 / nf, p as f64 / nf, 0.0];
            for (i, w) in want.iter().enumerate() {
                assert!((rho[(i, i)] - Complex64::new(*w, 0.0)).norm() <= 1e-10);
            }
            assert_eq!(rho[(3, 3)], Complex64::new(0.0, 0.0));

            // average of the shift components
            let avg = TwoQubitState::average(&report.shift_components).unwrap();
            assert!(avg.matrix().max_abs_diff(rho) <= 1e-12);

            // closed-form y against the partial-trace route
            let y = xi.compute_y().unwrap();
            assert!((y - report.y).norm() <= 1e-10);

            let c_form = special_form_concurrence(&report.rho).unwrap();
            assert!((c_form - 2.0 * y.norm() / nf).abs() <= 1e-10);
            let c_full = concurrence(&report.rho).unwrap().concurrence;
            assert!((c_full - c_form).abs() <= 1e-9, "n={} p={}", n, p);
        }
    }
}

#[test]
fn phases_never_increase_y() {
    let mut rng = rng(8);
    for (n, p) in all_valid_np(10) {
        let tuples = strict_tuples(n, p);
        let mut moduli: Vec<f64> = (0..tuples.len()).map(|_| rng.gen_range(0.1..1.0)).collect();
        let norm = moduli.iter().map(|m| m * m).sum::<f64>().sqrt();
        moduli.iter_mut().for_each(|m| *m /= norm);
        let real = BlockState::from_real(
            n,
            p,
            tuples.iter().cloned().zip(moduli.iter().copied()),
            ConstraintMode::Strict,
        )
        .unwrap();
        let y_real = real.compute_y().unwrap().norm();
        for _ in 0..10 {
            let phased = BlockState::new(
                n,
                p,
                tuples.iter().cloned().zip(moduli.iter().map(|&m| {
                    Complex64::from_polar(m, rng.gen_range(0.0..std::f64::consts::TAU))
                })),
                ConstraintMode::Strict,
            )
            .unwrap();
            assert!(phased.compute_y().unwrap().norm() <= y_real + 1e-12);
        }
    }
}

#[test]
fn free_fermion_ground_energy() {
    for (n, p) in all_valid_np(12) {
        let lattice = ReducedLattice::for_block(n, p).unwrap();
        let dense = hopping_matrix(lattice).unwrap().to_dense().unwrap();
        let lowest = *hermitian_eigen(&dense).unwrap().eigenvalues.last().unwrap();
        let e0 = single_particle_energies(lattice).ground_energy;
        assert!((lowest - e0).abs() <= 1e-9, "n={} p={}", n, p);
    }
}

#[test]
fn slater_state_reaches_closed_form() {
    for (n, p) in all_valid_np(12) {
        let lattice = ReducedLattice::for_block(n, p).unwrap();
        let b = slater_ground_state(lattice).unwrap();
        assert!(b.values().all(|&v| v >= -1e-12));
        let xi = BlockState::from_real(
            n,
            p,
            b.iter().map(|(k, &v)| (unmap_indices(k), v)),
            ConstraintMode::Strict,
        )
        .unwrap();
        let c = xi.chain_concurrence().unwrap();
        assert!((c - closed_form_concurrence(n, p).unwrap()).abs() <= 1e-9);
    }
}

#[test]
fn brute_force_coefficients_match_slater() {
    for (n, p) in all_valid_np(12) {
        let brute = brute_force_optimize(n, p).unwrap();
        let slater = slater_ground_state(ReducedLattice::for_block(n, p).unwrap()).unwrap();
        assert!((brute.best_concurrence - closed_form_concurrence(n, p).unwrap()).abs() <= 1e-8);
        for (k, v) in &slater {
            let j = unmap_indices(k);
            assert!(
                (brute.best_coefficients[&j] - v).abs() <= 1e-7,
                "n={} p={} tuple {:?}",
                n,
                p,
                j
            );
        }
        let norm: f64 = brute.best_coefficients.values().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn summed_form_matches_cosine_sum() {
    for n in 2..=200 {
        for p in 1..=n / 2 {
            let a = cosine_sum_concurrence(n, p);
            let b = summed_concurrence(n, p);
            assert!((a - b).abs() <= 1e-12, "n={} p={}", n, p);
            let c = closed_form_concurrence(n, p).unwrap();
            assert!((0.0..=std::f64::consts::FRAC_1_SQRT_2 + 1e-12).contains(&c));
        }
    }
}
