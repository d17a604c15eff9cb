use thiserror::Error;

/// Errors raised by the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fock dimension {0} is too small (need at least 2)")]
    InvalidFockDim(usize),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("states live in different Fock frames (squeeze {left} vs {right})")]
    FrameMismatch { left: f64, right: f64 },

    #[error("truncation inadequate: defect {defect:.3e} exceeds {threshold:.1e}")]
    Truncation { defect: f64, threshold: f64 },

    #[error("squeezed frame undefined: 1 + alpha*chi^2 - 4n*g0/omega = {argument:.6e} is not positive")]
    FrameUndefined { argument: f64 },

    #[error("no critical point: {reason}")]
    NoCriticalPoint { reason: &'static str },

    #[error("{construction} requires chi_n {requirement} 1, got chi_n = {chi_n}")]
    WrongPhase {
        construction: &'static str,
        requirement: &'static str,
        chi_n: f64,
    },

    #[error("zero norm: {context} (squared norm {norm_sqr:.3e})")]
    ZeroNorm {
        context: &'static str,
        norm_sqr: f64,
    },

    #[error("matrix is not symmetric: max deviation {deviation:.3e}")]
    NotSymmetric { deviation: f64 },

    #[error("eigenpair {index} did not converge after {iterations} iterations (residual {residual:.3e}, tolerance {tolerance:.1e})")]
    NoConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("subspace is not a parity doublet: projected parity eigenvalues {eigenvalues:?}")]
    ParityMixed { eigenvalues: [f64; 2] },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
