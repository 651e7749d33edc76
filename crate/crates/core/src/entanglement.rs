//! Two-qubit entanglement measures: Wootters concurrence for pure and mixed
//! states, the shortcut for X-block density matrices, entanglement of
//! formation and the monogamy budget for one qubit shared by two bonds.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, HERMITIAN_TOL, PSD_TOL};

/// Eigenvalues of `rho` below this are dropped when factoring `rho = W W^H`.
const RANK_TOL: f64 = 1e-14;
/// Entries that must vanish for the X-block shortcut.
pub const FORM_TOL: f64 = 1e-10;

/// A 4x4 density matrix in the basis `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: ComplexMatrix,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity (all to `1e-10`).
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "two-qubit density matrix must be 4x4, got {}x{}",
                rho.dim(),
                rho.dim()
            )));
        }
        let dev = rho.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace is {}", tr)));
        }
        let eig = hermitian_eigen(&rho)?;
        let min = eig.eigenvalues[3];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                min
            )));
        }
        Ok(Self { rho })
    }

    /// Projector onto a normalized pure state.
    pub fn from_pure(psi: &PureTwoQubit) -> Self {
        Self {
            rho: ComplexMatrix::outer(&psi.amplitudes()),
        }
    }

    /// Weighted mixture `sum_k w_k rho_k`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, &TwoQubitState)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameters(format!(
                "mixture weights must be non-negative and sum to 1 (sum = {})",
                total
            )));
        }
        let mut acc = ComplexMatrix::zeros(4);
        for (w, s) in parts {
            acc = &acc + &s.rho.scale_real(*w);
        }
        Ok(Self { rho: acc })
    }

    /// Equal-weight average of the given states.
    pub fn average(states: &[TwoQubitState]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidParameters("cannot average zero states".into()));
        }
        let w = 1.0 / states.len() as f64;
        let parts: Vec<(f64, &TwoQubitState)> = states.iter().map(|s| (w, s)).collect();
        let mut acc = ComplexMatrix::zeros(4);
        for (w, s) in parts {
            acc = &acc + &s.rho.scale_real(w);
        }
        Ok(Self { rho: acc })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// Entry `(i, j)` with 0-based indices.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.rho[(i, j)]
    }
}

/// `alpha|00> + beta|01> + gamma|10> + delta|11>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureTwoQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl PureTwoQubit {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr() + delta.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::UnnormalizedState { norm });
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

/// `2 |alpha delta - beta gamma|`.
pub fn pure_concurrence(psi: &PureTwoQubit) -> f64 {
    (2.0 * (psi.alpha * psi.delta - psi.beta * psi.gamma).norm()).min(1.0)
}

/// `sigma_y ⊗ sigma_y`, which is real in the computational basis.
fn sigma_yy() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        vec![0., 0., 0., -1.],
        vec![0., 0., 1., 0.],
        vec![0., 1., 0., 0.],
        vec![-1., 0., 0., 0.],
    ])
    .expect("4x4 literal")
}

/// Spin-flipped density matrix `(σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &TwoQubitState) -> ComplexMatrix {
    let s = sigma_yy();
    &(&s * &rho.rho.conj()) * &s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub concurrence: f64,
    /// Square roots of the eigenvalues of `ρ ρ̃`, descending, clamped at zero.
    pub lambdas: [f64; 4],
}

/// The four Wootters values before clamping, descending.
///
/// With `ρ = W W^H` (columns of `W` are the eigenvectors of `ρ` scaled by the
/// square roots of their eigenvalues) the λ's are the singular values of the
/// complex symmetric matrix `τ = W^T (σy⊗σy) W`. They are read off as the top
/// eigenvalues of the Hermitian matrix `[[0, τ], [τ^H, 0]]`, whose spectrum is
/// `±λ_i`. Going through `τ` keeps exactly vanishing λ's at round-off level
/// instead of the square root of round-off.
pub fn wootters_lambdas(rho: &TwoQubitState) -> Result<[f64; 4]> {
    let eig = hermitian_eigen(&rho.rho)?;
    let cols: Vec<Vec<Complex64>> = (0..4)
        .filter(|&k| eig.eigenvalues[k] > RANK_TOL)
        .map(|k| {
            let s = eig.eigenvalues[k].sqrt();
            eig.eigenvector(k).into_iter().map(|z| z * s).collect()
        })
        .collect();
    let r = cols.len();
    let mut out = [0.0; 4];
    if r == 0 {
        return Ok(out);
    }
    let sigma = sigma_yy();
    let flipped: Vec<Vec<Complex64>> = cols.iter().map(|w| sigma.mul_vec(w)).collect();
    // τ_ab = w_a^T Σ w_b (no conjugation)
    let tau = |a: usize, b: usize| -> Complex64 {
        cols[a]
            .iter()
            .zip(&flipped[b])
            .map(|(x, y)| x * y)
            .sum()
    };
    let mut embed = ComplexMatrix::zeros(2 * r);
    for a in 0..r {
        for b in 0..r {
            let t = tau(a, b);
            embed[(a, r + b)] = t;
            embed[(r + b, a)] = t.conj();
        }
    }
    let spectrum = hermitian_eigen(&embed)?;
    out[..r].copy_from_slice(&spectrum.eigenvalues[..r]);
    Ok(out)
}

/// Mixed-state concurrence `max(λ1 - λ2 - λ3 - λ4, 0)`.
pub fn concurrence(rho: &TwoQubitState) -> Result<ConcurrenceResult> {
    let raw = wootters_lambdas(rho)?;
    let lambdas = raw.map(|l| l.max(0.0));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(ConcurrenceResult {
        concurrence: c.clamp(0.0, 1.0),
        lambdas,
    })
}

/// `2|ρ23|` for a density matrix whose only non-zero off-diagonal entries are
/// the `|01>,|10>` coherences and whose `|11>` population vanishes.
pub fn special_form_concurrence(rho: &TwoQubitState) -> Result<f64> {
    const FORBIDDEN: [(usize, usize); 6] = [(0, 3), (1, 3), (2, 3), (3, 3), (0, 1), (0, 2)];
    let entries: Vec<(usize, usize)> = FORBIDDEN
        .iter()
        .filter(|&&(i, j)| rho.rho[(i, j)].norm() > FORM_TOL)
        .map(|&(i, j)| (i + 1, j + 1))
        .collect();
    if !entries.is_empty() {
        return Err(Error::FormViolation { entries });
    }
    Ok(2.0 * rho.rho[(1, 2)].norm())
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation (ebits) of a two-qubit state with concurrence `c`.
pub fn entanglement_of_formation(c: f64) -> Result<f64> {
    let c = unit_interval("concurrence", c)?;
    let x = 0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt());
    Ok(binary_entropy(x))
}

/// `C_left² + C_right²`, which is at most one for a qubit entangled with two partners.
pub fn ckw_budget(c_left: f64, c_right: f64) -> Result<f64> {
    let l = unit_interval("left concurrence", c_left)?;
    let r = unit_interval("right concurrence", c_right)?;
    Ok(l * l + r * r)
}

fn unit_interval(name: &'static str, value: f64) -> Result<f64> {
    // values a few ulps past the ends come from round-off
    if !(-1e-12..=1.0 + 1e-12).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix_sqrt_psd;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn state(rows: &[Vec<f64>]) -> TwoQubitState {
        TwoQubitState::new(ComplexMatrix::from_real_rows(rows).unwrap()).unwrap()
    }

    fn bicycle_rho() -> TwoQubitState {
        state(&[
            vec![0.125, 0., 0., 0.],
            vec![0., 0.375, -0.25, 0.],
            vec![0., -0.25, 0.375, 0.],
            vec![0., 0., 0., 0.125],
        ])
    }

    fn singlet() -> TwoQubitState {
        state(&[
            vec![0., 0., 0., 0.],
            vec![0., 0.5, -0.5, 0.],
            vec![0., -0.5, 0.5, 0.],
            vec![0., 0., 0., 0.],
        ])
    }

    /// λ's straight from the Hermitian carrier √(√ρ ρ̃ √ρ).
    fn lambdas_via_sqrt_carrier(rho: &TwoQubitState) -> Vec<f64> {
        let s = matrix_sqrt_psd(rho.matrix()).unwrap();
        let inner = &(&s * &spin_flip(rho)) * &s;
        let carrier = matrix_sqrt_psd(&inner).unwrap();
        hermitian_eigen(&carrier).unwrap().eigenvalues
    }

    #[test]
    fn pure_examples() {
        let h = FRAC_1_SQRT_2;
        let singlet = PureTwoQubit::new(c(0.), c(h), c(-h), c(0.)).unwrap();
        assert!((pure_concurrence(&singlet) - 1.0).abs() < 1e-15);
        let zero = PureTwoQubit::new(c(1.), c(0.), c(0.), c(0.)).unwrap();
        assert_eq!(pure_concurrence(&zero), 0.0);
        let bell = PureTwoQubit::new(c(h), c(0.), c(0.), c(h)).unwrap();
        assert!((pure_concurrence(&bell) - 1.0).abs() < 1e-15);
        assert!(matches!(
            PureTwoQubit::new(c(1.), c(1.), c(0.), c(0.)),
            Err(Error::UnnormalizedState { .. })
        ));
    }

    #[test]
    fn spin_flip_examples() {
        let rho = bicycle_rho();
        assert!(spin_flip(&rho).max_abs_diff(rho.matrix()) < 1e-15);

        let p00 = state(&[
            vec![1., 0., 0., 0.],
            vec![0., 0., 0., 0.],
            vec![0., 0., 0., 0.],
            vec![0., 0., 0., 0.],
        ]);
        let want = ComplexMatrix::from_real_diagonal(&[0., 0., 0., 1.]);
        assert!(spin_flip(&p00).max_abs_diff(&want) < 1e-15);

        let mixed = TwoQubitState::new(ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert!(spin_flip(&mixed).max_abs_diff(mixed.matrix()) < 1e-15);
    }

    #[test]
    fn bicycle_concurrence() {
        let r = concurrence(&bicycle_rho()).unwrap();
        let want = [0.625, 0.125, 0.125, 0.125];
        for (l, w) in r.lambdas.iter().zip(want) {
            assert!((l - w).abs() < 1e-12, "{:?}", r.lambdas);
        }
        assert!((r.concurrence - 0.25).abs() < 1e-12);
    }

    #[test]
    fn singlet_and_maximally_mixed() {
        assert!((concurrence(&singlet()).unwrap().concurrence - 1.0).abs() < 1e-12);
        let mixed = TwoQubitState::new(ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        let r = concurrence(&mixed).unwrap();
        assert_eq!(r.concurrence, 0.0);
        for l in r.lambdas {
            assert!((l - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn sqrt_carrier_agrees_on_full_rank_states() {
        let rho = bicycle_rho();
        let via_carrier = lambdas_via_sqrt_carrier(&rho);
        let direct = concurrence(&rho).unwrap().lambdas;
        for (a, b) in via_carrier.iter().zip(direct) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn special_form_examples() {
        let x = FRAC_1_SQRT_2;
        let rho = state(&[
            vec![0.2, 0., 0., 0.],
            vec![0., 0.4, x / 5.0, 0.],
            vec![0., x / 5.0, 0.4, 0.],
            vec![0., 0., 0., 0.],
        ]);
        let c_form = special_form_concurrence(&rho).unwrap();
        assert!((c_form - 0.282_842_712_474_619).abs() < 1e-12);
        assert!((concurrence(&rho).unwrap().concurrence - c_form).abs() < 1e-9);

        let p00 = state(&[
            vec![1., 0., 0., 0.],
            vec![0., 0., 0., 0.],
            vec![0., 0., 0., 0.],
            vec![0., 0., 0., 0.],
        ]);
        assert_eq!(special_form_concurrence(&p00).unwrap(), 0.0);
        assert!((special_form_concurrence(&singlet()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn special_form_rejects_other_shapes() {
        match special_form_concurrence(&bicycle_rho()) {
            Err(Error::FormViolation { entries }) => assert_eq!(entries, vec![(4, 4)]),
            other => panic!("expected FormViolation, got {:?}", other),
        }
    }

    #[test]
    fn formation_examples() {
        assert!((entanglement_of_formation(0.434467).unwrap() - 0.284934).abs() < 1e-6);
        assert!((entanglement_of_formation(0.25).unwrap() - 0.118).abs() < 5e-4);
        assert_eq!(entanglement_of_formation(0.0).unwrap(), 0.0);
        assert_eq!(entanglement_of_formation(1.0).unwrap(), 1.0);
        assert!(matches!(
            entanglement_of_formation(1.5),
            Err(Error::OutOfRange { .. })
        ));
        assert!(entanglement_of_formation(f64::NAN).is_err());
    }

    #[test]
    fn formation_is_monotone() {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let e = entanglement_of_formation(i as f64 / 1000.0).unwrap();
            assert!(e >= prev);
            prev = e;
        }
    }

    #[test]
    fn ckw_examples() {
        let h = FRAC_1_SQRT_2;
        assert!((ckw_budget(h, h).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ckw_budget(0.0, 1.0).unwrap(), 1.0);
        // 2 * 0.434467^2 by hand
        assert!((ckw_budget(0.434467, 0.434467).unwrap() - 0.377_523_148_178).abs() < 1e-12);
        assert!(ckw_budget(-0.5, 0.2).is_err());
    }

    #[test]
    fn invalid_states_rejected() {
        let not_unit = ComplexMatrix::identity(4);
        assert!(TwoQubitState::new(not_unit).is_err());
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5, 0.0, 0.0]);
        assert!(TwoQubitState::new(negative).is_err());
        assert!(TwoQubitState::new(ComplexMatrix::identity(2).scale_real(0.5)).is_err());
    }
}
