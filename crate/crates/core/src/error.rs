use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which of the block-state constraints a coefficient tuple breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Two occupied sites are adjacent.
    AdjacentOccupation,
    /// The last site of the block is occupied.
    LastSiteOccupied,
    /// More particles than fit with one empty site after each (`2p > n`).
    TooManyParticles,
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Constraint::AdjacentOccupation => write!(f, "two neighboring sites are both occupied"),
            Constraint::LastSiteOccupied => write!(f, "the last site of the block is occupied"),
            Constraint::TooManyParticles => write!(f, "particle count exceeds half the block size"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("matrix has a negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("site index {site} out of range for {n} sites")]
    IndexOutOfRange { site: usize, n: usize },

    #[error("state is not normalized (norm {norm})")]
    UnnormalizedState { norm: f64 },

    #[error("not a valid two-qubit density matrix: {0}")]
    InvalidState(String),

    #[error("density matrix does not have the X-block form; offending entries: {entries:?}")]
    FormViolation { entries: Vec<(usize, usize)> },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("tuple {tuple:?} violates block constraint: {constraint}")]
    ConstraintViolation {
        tuple: Vec<usize>,
        constraint: Constraint,
    },

    #[error("coefficients have norm {norm}, too far from 1 to renormalize")]
    BadNormalization { norm: f64 },

    #[error("invalid tuple {tuple:?}: {reason}")]
    InvalidTuple { tuple: Vec<usize>, reason: String },

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("operation requires a strict-mode block state")]
    RelaxedModeUnsupported,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("malformed coefficient file at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no sign change on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
}

impl Error {
    /// True for numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::NoRoot { .. })
    }
}
