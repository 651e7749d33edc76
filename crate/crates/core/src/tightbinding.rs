//! Reduction of the constrained block problem to hard-core particles hopping
//! on an open chain.
//!
//! Deleting the site to the right of every particle turns a block of `n`
//! sites with `p` non-adjacent particles (last site empty) into `p`
//! unconstrained particles on a chain of `n' - 1 = n - p` sites. On that
//! chain the adjacent-pair sum `y` becomes the hopping expectation value,
//! so the best chain concurrence is `-E_0 / n` where `E_0` is the ground
//! energy of the nearest-neighbor hopping Hamiltonian. Its ground state is a
//! Slater determinant of the standing waves `sin(m π k / n')`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use crate::chain::{BlockState, ConstraintMode};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest many-body basis the hopping matrix is built for.
pub const MAX_BASIS_DIM: usize = 100_000;
/// Largest many-body basis converted to a dense matrix.
pub const MAX_DENSE_DIM: usize = 4096;

/// Chain of `n' - 1` sites holding `p` particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedLattice {
    n_prime: usize,
    p: usize,
}

impl ReducedLattice {
    pub fn new(n_prime: usize, p: usize) -> Result<Self> {
        if n_prime < 2 {
            return Err(Error::InvalidParameters(format!(
                "n' must be at least 2, got {}",
                n_prime
            )));
        }
        if p > n_prime - 1 {
            return Err(Error::InvalidParameters(format!(
                "{} particles do not fit on {} sites",
                p,
                n_prime - 1
            )));
        }
        Ok(Self { n_prime, p })
    }

    /// Lattice for a block of `n` sites with `p` particles (`n' = n - p + 1`).
    pub fn for_block(n: usize, p: usize) -> Result<Self> {
        if n < 2 || 2 * p > n {
            return Err(Error::InvalidParameters(format!(
                "need n >= 2 and 2p <= n, got n = {}, p = {}",
                n, p
            )));
        }
        Self::new(n - p + 1, p)
    }

    pub fn n_prime(&self) -> usize {
        self.n_prime
    }

    /// Number of sites, `n' - 1`.
    pub fn length(&self) -> usize {
        self.n_prime - 1
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Block size `n` this lattice came from.
    pub fn block_size(&self) -> usize {
        self.n_prime + self.p - 1
    }

    pub fn basis_dim(&self) -> u128 {
        binomial(self.length() as u128, self.p as u128)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Maps an occupied-site tuple of an `n`-site block to the reduced lattice:
/// `k_r = j_r - (r - 1)`.
pub fn remap_indices(j: &[usize], n: usize) -> Result<Vec<usize>> {
    if j.iter().any(|&s| s == 0 || s > n) || j.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidTuple {
            tuple: j.to_vec(),
            reason: format!("sites must be strictly increasing within 1..={}", n),
        });
    }
    if let Some(constraint) = crate::chain::strict_violation(j, n) {
        return Err(Error::ConstraintViolation {
            tuple: j.to_vec(),
            constraint,
        });
    }
    Ok(j.iter().enumerate().map(|(r, &s)| s - r).collect())
}

/// Inverse of [`remap_indices`]: `j_r = k_r + (r - 1)`.
pub fn unmap_indices(k: &[usize]) -> Vec<usize> {
    k.iter().enumerate().map(|(r, &s)| s + r).collect()
}

/// All increasing `p`-tuples of `1..=length` in lexicographic order.
pub fn lexicographic_basis(length: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=p).collect();
    if p > length {
        return out;
    }
    loop {
        out.push(cur.clone());
        // rightmost position that can still advance
        let Some(i) = (0..p).rev().find(|&i| cur[i] < length - (p - 1 - i)) else {
            break;
        };
        cur[i] += 1;
        for t in i + 1..p {
            cur[t] = cur[t - 1] + 1;
        }
    }
    out
}

/// `H = -Σ_k (c†_k c_{k+1} + h.c.)` on the fixed-particle-number sector,
/// stored as the list of basis pairs connected by a single hop.
#[derive(Debug, Clone)]
pub struct HoppingMatrix {
    lattice: ReducedLattice,
    basis: Vec<Vec<usize>>,
    /// `(i, j)` with `i < j`; the matrix element is `-1` both ways.
    hops: Vec<(usize, usize)>,
}

impl HoppingMatrix {
    pub fn lattice(&self) -> ReducedLattice {
        self.lattice
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn hops(&self) -> &[(usize, usize)] {
        &self.hops
    }

    /// `H x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for &(i, j) in &self.hops {
            out[i] -= x[j];
            out[j] -= x[i];
        }
        out
    }

    /// `x^T H x`.
    pub fn expectation(&self, x: &[f64]) -> f64 {
        -2.0 * self.hops.iter().map(|&(i, j)| x[i] * x[j]).sum::<f64>()
    }

    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        if self.dim() > MAX_DENSE_DIM {
            return Err(Error::TooLarge(format!(
                "dense hopping matrix of dimension {} (limit {})",
                self.dim(),
                MAX_DENSE_DIM
            )));
        }
        let mut m = ComplexMatrix::zeros(self.dim());
        for &(i, j) in &self.hops {
            m[(i, j)].re = -1.0;
            m[(j, i)].re = -1.0;
        }
        Ok(m)
    }
}

pub fn hopping_matrix(lattice: ReducedLattice) -> Result<HoppingMatrix> {
    let dim = lattice.basis_dim();
    if dim > MAX_BASIS_DIM as u128 {
        return Err(Error::TooLarge(format!(
            "many-body basis of dimension {} (limit {})",
            dim, MAX_BASIS_DIM
        )));
    }
    let length = lattice.length();
    let basis = lexicographic_basis(length, lattice.p);
    let index: HashMap<&[usize], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut hops = Vec::new();
    for (i, tuple) in basis.iter().enumerate() {
        for q in 0..tuple.len() {
            let target = tuple[q] + 1;
            if target > length || tuple.get(q + 1) == Some(&target) {
                continue;
            }
            let mut moved = tuple.clone();
            moved[q] = target;
            hops.push((i, index[moved.as_slice()]));
        }
    }
    hops.sort_unstable();
    Ok(HoppingMatrix {
        lattice,
        basis,
        hops,
    })
}

/// Single-particle levels of the open chain and the `p`-particle ground energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// `E_m = -2 cos(m π / n')` for `m = 1..n'-1`, ascending.
    pub energies: Vec<f64>,
    /// Sum of the lowest `p` levels.
    pub ground_energy: f64,
}

pub fn single_particle_energies(lattice: ReducedLattice) -> SpectrumResult {
    let np = lattice.n_prime as f64;
    let energies: Vec<f64> = (1..lattice.n_prime)
        .map(|m| -2.0 * (m as f64 * PI / np).cos())
        .collect();
    let p = lattice.p;
    if p > 0 && p < energies.len() {
        assert!(
            energies[p - 1] < energies[p],
            "degenerate Fermi level at p = {}",
            p
        );
    }
    let ground_energy = energies[..p].iter().sum();
    SpectrumResult {
        energies,
        ground_energy,
    }
}

/// Determinant of a row-major `p x p` matrix. Cofactor expansion up to 4x4,
/// Gaussian elimination with partial pivoting beyond.
pub fn determinant(m: &[f64], p: usize) -> f64 {
    assert_eq!(m.len(), p * p);
    match p {
        0 => 1.0,
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 | 4 => (0..p)
            .map(|col| {
                let minor: Vec<f64> = (1..p)
                    .flat_map(|r| (0..p).filter(move |&c| c != col).map(move |c| (r, c)))
                    .map(|(r, c)| m[r * p + c])
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[col] * determinant(&minor, p - 1)
            })
            .sum(),
        _ => {
            let mut a = m.to_vec();
            let mut det = 1.0;
            for col in 0..p {
                let pivot = (col..p)
                    .max_by(|&i, &j| a[i * p + col].abs().total_cmp(&a[j * p + col].abs()))
                    .unwrap();
                if a[pivot * p + col] == 0.0 {
                    return 0.0;
                }
                if pivot != col {
                    for c in 0..p {
                        a.swap(pivot * p + c, col * p + c);
                    }
                    det = -det;
                }
                let d = a[col * p + col];
                det *= d;
                for r in col + 1..p {
                    let f = a[r * p + col] / d;
                    if f != 0.0 {
                        for c in col..p {
                            a[r * p + c] -= f * a[col * p + c];
                        }
                    }
                }
            }
            det
        }
    }
}

/// Ground state of the hopping Hamiltonian as coefficients over reduced-lattice
/// tuples: the antisymmetrized product of the `p` lowest standing waves,
/// normalized, with the largest component positive.
pub fn slater_ground_state(lattice: ReducedLattice) -> Result<BTreeMap<Vec<usize>, f64>> {
    let p = lattice.p;
    if p == 0 {
        return Ok(BTreeMap::from([(Vec::new(), 1.0)]));
    }
    let dim = lattice.basis_dim();
    if dim > MAX_BASIS_DIM as u128 {
        return Err(Error::TooLarge(format!(
            "many-body basis of dimension {} (limit {})",
            dim, MAX_BASIS_DIM
        )));
    }
    let np = lattice.n_prime as f64;
    let basis = lexicographic_basis(lattice.length(), p);
    let mut amps: Vec<f64> = basis
        .iter()
        .map(|k| {
            let m: Vec<f64> = (1..=p)
                .flat_map(|mode| k.iter().map(move |&site| (mode as f64 * PI * site as f64 / np).sin()))
                .collect();
            determinant(&m, p)
        })
        .collect();

    let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    let largest = amps
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(1.0);
    let scale = largest.signum() / norm;
    for a in amps.iter_mut() {
        *a *= scale;
        assert!(*a >= -1e-12, "Slater coefficient {} is negative", a);
        *a = a.max(0.0);
    }
    Ok(basis.into_iter().zip(amps).collect())
}

/// The Slater ground state carried back to a strict-mode block of `n` sites.
pub fn optimal_block_state(n: usize, p: usize) -> Result<BlockState> {
    let lattice = ReducedLattice::for_block(n, p)?;
    let coeffs = slater_ground_state(lattice)?;
    BlockState::from_real(
        n,
        p,
        coeffs.into_iter().map(|(k, b)| (unmap_indices(&k), b)),
        ConstraintMode::Strict,
    )
}

/// `(2/n) Σ_{m=1..p} cos(m π / n')`.
pub fn cosine_sum_concurrence(n: usize, p: usize) -> f64 {
    let np = (n - p + 1) as f64;
    2.0 / n as f64 * (1..=p).map(|m| (m as f64 * PI / np).cos()).sum::<f64>()
}

/// Summed form
/// `(1/n) [cos(pπ/n') - cos((p+1)π/n') + cos(π/n') - 1] / [1 - cos(π/n')]`,
/// with `1 - cos θ` evaluated as `2 sin²(θ/2)` to avoid cancellation.
pub fn summed_concurrence(n: usize, p: usize) -> f64 {
    let np = (n - p + 1) as f64;
    let one_minus_cos = |theta: f64| 2.0 * (0.5 * theta).sin().powi(2);
    let pf = p as f64;
    let num = (pf * PI / np).cos() - ((pf + 1.0) * PI / np).cos() - one_minus_cos(PI / np);
    num / one_minus_cos(PI / np) / n as f64
}

/// Largest chain concurrence for blocks of `n` sites with `p` particles.
pub fn closed_form_concurrence(n: usize, p: usize) -> Result<f64> {
    if n < 2 || 2 * p > n {
        return Err(Error::InvalidParameters(format!(
            "need n >= 2 and 2p <= n, got n = {}, p = {}",
            n, p
        )));
    }
    let by_sum = cosine_sum_concurrence(n, p);
    let closed = summed_concurrence(n, p);
    assert!(
        (by_sum - closed).abs() <= 1e-12,
        "cosine sum {} and summed form {} disagree for n = {}, p = {}",
        by_sum,
        closed,
        n,
        p
    );
    // The sum is exactly zero when the band is half filled, e.g. n = 2p.
    Ok(if by_sum.abs() < 1e-14 { 0.0 } else { by_sum.max(0.0) })
}
