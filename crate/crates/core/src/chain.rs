//! Block states and the nearest-neighbor density matrix of the chain built
//! by tiling a block and averaging over its translations.
//!
//! A block state on `n` sites is stored as a map from occupied-site tuples
//! `(j_1 < ... < j_p)` (1-based) to amplitudes. In strict mode the tuples must
//! keep an empty site after every particle, including across the block
//! boundary, so that the pair density matrix has the X-block form with a
//! vanishing `|11>` population.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::TwoQubitState;
use crate::error::{Constraint, Error, Result};
use crate::linalg::{partial_trace_pair, reduced_density_matrix, tensor_product, ComplexMatrix};

/// Largest block expanded to a full state vector.
pub const MAX_EXPAND_SITES: usize = 20;
/// Largest block handled by the partial-trace enumeration.
pub const MAX_ENUMERATION_SITES: usize = 12;
/// Inputs whose norm is within this of 1 are silently renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintMode {
    /// Fixed particle number, no adjacent particles, last site empty.
    #[default]
    Strict,
    /// Only fixed particle number and valid tuples.
    Relaxed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockState {
    n: usize,
    p: usize,
    coefficients: BTreeMap<Vec<usize>, Complex64>,
    mode: ConstraintMode,
}

/// Which strict-mode constraint a tuple breaks, if any.
pub fn strict_violation(tuple: &[usize], n: usize) -> Option<Constraint> {
    if tuple.windows(2).any(|w| w[1] == w[0] + 1) {
        Some(Constraint::AdjacentOccupation)
    } else if tuple.last() == Some(&n) {
        Some(Constraint::LastSiteOccupied)
    } else {
        None
    }
}

impl BlockState {
    /// Validates and normalizes a block state.
    pub fn new(
        n: usize,
        p: usize,
        coefficients: impl IntoIterator<Item = (Vec<usize>, Complex64)>,
        mode: ConstraintMode,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameters(format!(
                "block size must be at least 2, got {}",
                n
            )));
        }
        if p > n {
            return Err(Error::InvalidParameters(format!(
                "{} particles do not fit on {} sites",
                p, n
            )));
        }
        if mode == ConstraintMode::Strict && 2 * p > n {
            return Err(Error::ConstraintViolation {
                tuple: Vec::new(),
                constraint: Constraint::TooManyParticles,
            });
        }

        let mut map = BTreeMap::new();
        for (tuple, amp) in coefficients {
            if tuple.len() != p {
                return Err(Error::InvalidTuple {
                    tuple,
                    reason: format!("expected {} occupied sites", p),
                });
            }
            if tuple.iter().any(|&j| j == 0 || j > n) {
                return Err(Error::InvalidTuple {
                    tuple,
                    reason: format!("sites must lie in 1..={}", n),
                });
            }
            if tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidTuple {
                    tuple,
                    reason: "sites must be strictly increasing".into(),
                });
            }
            if mode == ConstraintMode::Strict {
                if let Some(constraint) = strict_violation(&tuple, n) {
                    return Err(Error::ConstraintViolation { tuple, constraint });
                }
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::InvalidTuple {
                    tuple,
                    reason: "amplitude is not finite".into(),
                });
            }
            if map.insert(tuple.clone(), amp).is_some() {
                return Err(Error::InvalidTuple {
                    tuple,
                    reason: "listed more than once".into(),
                });
            }
        }

        let norm = map.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::BadNormalization { norm });
        }
        for a in map.values_mut() {
            *a /= norm;
        }
        Ok(Self {
            n,
            p,
            coefficients: map,
            mode,
        })
    }

    /// Same as [`BlockState::new`] with real amplitudes.
    pub fn from_real(
        n: usize,
        p: usize,
        coefficients: impl IntoIterator<Item = (Vec<usize>, f64)>,
        mode: ConstraintMode,
    ) -> Result<Self> {
        Self::new(
            n,
            p,
            coefficients
                .into_iter()
                .map(|(t, a)| (t, Complex64::new(a, 0.0))),
            mode,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn mode(&self) -> ConstraintMode {
        self.mode
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<usize>, Complex64> {
        &self.coefficients
    }

    pub fn amplitude(&self, tuple: &[usize]) -> Complex64 {
        self.coefficients
            .get(tuple)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Full `2^n` amplitude vector, site 1 as the most significant bit.
    pub fn expand_to_vector(&self) -> Result<Vec<Complex64>> {
        if self.n > MAX_EXPAND_SITES {
            return Err(Error::TooLarge(format!(
                "cannot expand a {}-site block (limit {})",
                self.n, MAX_EXPAND_SITES
            )));
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for (tuple, &amp) in &self.coefficients {
            let idx = tuple.iter().fold(0usize, |acc, &j| acc | 1 << (self.n - j));
            psi[idx] = amp;
        }
        Ok(psi)
    }

    /// Nearest-neighbor density matrix of the translation-averaged chain,
    /// by explicit partial traces of the expanded block.
    pub fn pair_density_matrix(&self) -> Result<PairDensityReport> {
        if self.n > MAX_ENUMERATION_SITES {
            return Err(Error::TooLarge(format!(
                "partial-trace enumeration is limited to {} sites, got {}",
                MAX_ENUMERATION_SITES, self.n
            )));
        }
        let psi = self.expand_to_vector()?;
        let mut shift_components = Vec::with_capacity(self.n);
        for k in 0..self.n - 1 {
            shift_components.push(partial_trace_pair(&psi, k + 1)?);
        }
        // The pair straddling two blocks: last site of one, first of the next.
        let last = reduced_density_matrix(&psi, &[self.n])?;
        let first = reduced_density_matrix(&psi, &[1])?;
        shift_components.push(TwoQubitState::new(tensor_product(&last, &first))?);

        let rho = TwoQubitState::average(&shift_components)?;
        let y = rho.entry(1, 2) * self.n as f64;
        Ok(PairDensityReport {
            rho,
            y,
            shift_components,
        })
    }

    /// Sum over adjacent coefficient pairs `conj(a_j) a_j'`, where `j'` moves
    /// one particle of `j` one site to the right.
    pub fn compute_y(&self) -> Result<Complex64> {
        if self.mode != ConstraintMode::Strict {
            return Err(Error::RelaxedModeUnsupported);
        }
        let mut y = Complex64::new(0.0, 0.0);
        for (tuple, &amp) in &self.coefficients {
            for q in 0..tuple.len() {
                let mut moved = tuple.clone();
                moved[q] += 1;
                if let Some(&next) = self.coefficients.get(&moved) {
                    y += amp.conj() * next;
                }
            }
        }
        Ok(y)
    }

    /// Chain concurrence `(2/n)|y|` (strict mode only).
    pub fn chain_concurrence(&self) -> Result<f64> {
        Ok(2.0 * self.compute_y()?.norm() / self.n as f64)
    }

    /// Parses the JSON coefficient-file format.
    pub fn from_json(text: &str, mode: ConstraintMode) -> Result<Self> {
        let file: CoefficientFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.into_block_state(mode)
    }

    pub fn to_coefficient_file(&self) -> CoefficientFile {
        CoefficientFile {
            n: self.n,
            p: self.p,
            coefficients: self
                .coefficients
                .iter()
                .map(|(sites, a)| CoefficientEntry {
                    sites: sites.clone(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

/// Free-function form of [`BlockState::new`].
pub fn build_block_state(
    n: usize,
    p: usize,
    coefficients: impl IntoIterator<Item = (Vec<usize>, Complex64)>,
    mode: ConstraintMode,
) -> Result<BlockState> {
    BlockState::new(n, p, coefficients, mode)
}

/// On-disk coefficient file:
/// `{"n": 5, "p": 2, "coefficients": [{"sites": [1, 3], "re": 0.5, "im": 0.0}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub n: usize,
    pub p: usize,
    pub coefficients: Vec<CoefficientEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub sites: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl CoefficientFile {
    pub fn into_block_state(self, mode: ConstraintMode) -> Result<BlockState> {
        BlockState::new(
            self.n,
            self.p,
            self.coefficients
                .into_iter()
                .map(|e| (e.sites, Complex64::new(e.re, e.im))),
            mode,
        )
    }
}

/// Pair density matrix of the chain together with the per-shift pieces it
/// averages. `shift_components[k]` is the pair `(k+1, k+2)` of the block for
/// `k < n-1`; the last entry is the pair straddling the block boundary.
#[derive(Debug, Clone)]
pub struct PairDensityReport {
    pub rho: TwoQubitState,
    /// `n * rho_23`.
    pub y: Complex64,
    pub shift_components: Vec<TwoQubitState>,
}

/// The strict-mode pair density matrix
/// `(1/n) [[n-2p, 0, 0, 0], [0, p, y, 0], [0, conj(y), p, 0], [0, 0, 0, 0]]`.
pub fn pair_density_from_y(n: usize, p: usize, y: Complex64) -> Result<TwoQubitState> {
    if n < 2 || 2 * p > n {
        return Err(Error::InvalidParameters(format!(
            "need n >= 2 and 2p <= n, got n = {}, p = {}",
            n, p
        )));
    }
    let nf = n as f64;
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new((n - 2 * p) as f64 / nf, 0.0);
    m[(1, 1)] = Complex64::new(p as f64 / nf, 0.0);
    m[(2, 2)] = Complex64::new(p as f64 / nf, 0.0);
    m[(1, 2)] = y / nf;
    m[(2, 1)] = y.conj() / nf;
    TwoQubitState::new(m)
}
