//! Maximizing the chain concurrence: a brute-force Perron eigenvector search
//! over the constrained coefficient space, the large-block limit as a
//! function of the particle density, and the sweep over block sizes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::entanglement_of_formation;
use crate::error::{Error, Result};
use crate::tightbinding::{closed_form_concurrence, hopping_matrix, unmap_indices, ReducedLattice};

const POWER_SHIFT: f64 = 2.0;
const POWER_RQ_TOL: f64 = 1e-12;
const POWER_RESIDUAL_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 100_000;

const ALPHA_BRACKET: (f64, f64) = (0.2, 0.45);
const STATIONARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_concurrence: f64,
    /// Optimal amplitudes keyed by occupied block sites `(j_1, ..., j_p)`.
    pub best_coefficients: BTreeMap<Vec<usize>, f64>,
    /// Top eigenvalue of the adjacency matrix (the Lagrange multiplier).
    pub lagrange_eigenvalue: f64,
    pub iterations: usize,
}

/// Maximizes `(2/n)|y|` over normalized strict-mode block states by power
/// iteration on the adjacency matrix of the constrained basis (minus the
/// hopping matrix), shifted by `2I` so the iteration is primitive and
/// converges to the non-negative Perron vector.
pub fn brute_force_optimize(n: usize, p: usize) -> Result<OptimizationResult> {
    let lattice = ReducedLattice::for_block(n, p)?;
    let h = hopping_matrix(lattice)?;
    let dim = h.dim();

    let adjacency = |x: &[f64]| -> Vec<f64> { h.apply(x).into_iter().map(|v| -v).collect() };
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut x = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut prev_rq = f64::NAN;
    let mut iterations = 0;
    let gamma = loop {
        let ax = adjacency(&x);
        let rq: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let residual = norm(
            &ax.iter()
                .zip(&x)
                .map(|(a, v)| a - rq * v)
                .collect::<Vec<_>>(),
        );
        if dim == 1 || ((rq - prev_rq).abs() <= POWER_RQ_TOL && residual <= POWER_RESIDUAL_TOL) {
            break rq;
        }
        if iterations == POWER_MAX_ITER {
            return Err(Error::NoConvergence {
                what: "power iteration",
                iterations,
                residual,
            });
        }
        iterations += 1;
        prev_rq = rq;
        let shifted: Vec<f64> = ax
            .iter()
            .zip(&x)
            .map(|(a, v)| a + POWER_SHIFT * v)
            .collect();
        let s = norm(&shifted);
        x = shifted.into_iter().map(|v| v / s).collect();
    };

    // Non-negative iterates from a positive start stay non-negative.
    assert!(x.iter().all(|&v| v >= -1e-12), "Perron vector has a negative entry");
    let y = -0.5 * h.expectation(&x);
    let best_concurrence = 2.0 * y / n as f64;
    let best_coefficients = h
        .basis()
        .iter()
        .zip(&x)
        .map(|(k, &v)| (unmap_indices(k), v.max(0.0)))
        .collect();
    Ok(OptimizationResult {
        best_concurrence,
        best_coefficients,
        lagrange_eigenvalue: gamma,
        iterations,
    })
}

/// Large-block limit of the best concurrence at particle density `alpha`:
/// `(2/π)(1-α) sin(απ/(1-α))`.
pub fn c_lim(alpha: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            lo: 0.0,
            hi: 0.5,
        });
    }
    Ok(2.0 / PI * (1.0 - alpha) * (alpha * PI / (1.0 - alpha)).sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumResult {
    pub alpha: f64,
    pub c_lim: f64,
    /// `|tan(απ/(1-α)) - π/(1-α)|` at `alpha`.
    pub stationarity_residual: f64,
}

/// `tan(απ/(1-α)) - π/(1-α)`.
pub fn stationarity_residual(alpha: f64) -> f64 {
    ((alpha * PI / (1.0 - alpha)).tan() - PI / (1.0 - alpha)).abs()
}

/// Derivative of `c_lim` up to the positive factor `2/π`:
/// `π cos θ / (1-α) - sin θ` with `θ = απ/(1-α)`. Its zero is the
/// stationarity condition `tan θ = π/(1-α)` without the pole of `tan` at
/// `α = 1/3`.
fn c_lim_slope(alpha: f64) -> f64 {
    let theta = alpha * PI / (1.0 - alpha);
    PI * theta.cos() / (1.0 - alpha) - theta.sin()
}

/// Density maximizing `c_lim`, by bisection on its derivative.
pub fn optimize_alpha() -> Result<ContinuumResult> {
    let (mut lo, mut hi) = ALPHA_BRACKET;
    let (f_lo, f_hi) = (c_lim_slope(lo), c_lim_slope(hi));
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if c_lim_slope(mid).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let residual = stationarity_residual(alpha);
    if residual > STATIONARITY_TOL {
        return Err(Error::NoConvergence {
            what: "density bisection",
            iterations: 200,
            residual,
        });
    }
    Ok(ContinuumResult {
        alpha,
        c_lim: c_lim(alpha)?,
        stationarity_residual: residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub p: usize,
    pub concurrence: f64,
    pub entanglement_of_formation: f64,
}

/// Best particle number for one block size; ties go to the smaller `p`.
pub fn best_for_block(n: usize) -> Result<SweepRow> {
    let mut best = (0usize, closed_form_concurrence(n, 0)?);
    for p in 1..=n / 2 {
        let c = closed_form_concurrence(n, p)?;
        if c > best.1 + 1e-12 {
            best = (p, c);
        }
    }
    Ok(SweepRow {
        n,
        p: best.0,
        concurrence: best.1,
        entanglement_of_formation: entanglement_of_formation(best.1)?,
    })
}

/// Best `(p, C, E_f)` for every block size `2..=n_max`, sorted by `n`.
pub fn sweep(n_max: usize) -> Result<Vec<SweepRow>> {
    if n_max < 2 {
        return Err(Error::InvalidParameters(format!(
            "n_max must be at least 2, got {}",
            n_max
        )));
    }
    (2..=n_max).into_par_iter().map(best_for_block).collect()
}
