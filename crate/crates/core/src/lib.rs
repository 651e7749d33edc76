//! Translationally invariant entangled chains of qubits.
//!
//! A chain is built by tiling an `n`-qubit block state and averaging over
//! the `n` translations of the tiling. This crate computes the resulting
//! nearest-neighbor density matrix and its concurrence exactly, and finds
//! the block states that maximize it under the particle-number,
//! no-adjacent-occupation and empty-last-site constraints. The optimum is
//! the ground state of a free-fermion hopping chain, which is checked
//! against a direct eigenvector search.
//!
//! Site 1 of any register is the most significant bit of the basis index.

pub mod chain;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod tightbinding;

pub use chain::{BlockState, ConstraintMode, PairDensityReport};
pub use entanglement::{
    concurrence, entanglement_of_formation, pure_concurrence, special_form_concurrence,
    ConcurrenceResult, PureTwoQubit, TwoQubitState,
};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use optimize::{brute_force_optimize, c_lim, optimize_alpha, sweep};
pub use tightbinding::{closed_form_concurrence, slater_ground_state, ReducedLattice};
