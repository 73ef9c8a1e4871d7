//! Crate-wide error type.

use crate::gbz::FloquetGbz;
use crate::scalar::Real;
use thiserror::Error;

/// Errors produced by the solver and oracle layers.
#[derive(Debug, Error)]
pub enum Error<T: Real> {
    #[error("Laurent polynomial evaluated at beta = 0 (pole)")]
    LaurentPole,

    #[error("zero polynomial has no roots")]
    ZeroPolynomial,

    #[error("root count deficit: found {found} of {expected} finite roots")]
    RootDeficit { found: usize, expected: usize },

    #[error("resultant interpolation residual {residual} exceeds tolerance (tried radii {tried:?})")]
    IllConditionedResultant { residual: T, tried: Vec<T> },

    #[error("resultant of a characteristic polynomial with itself (l = 0, theta = 0) is identically zero")]
    DegenerateResultantSpec,

    #[error("eigenvalue iteration failed to converge at index {0}")]
    EigNonConvergence(usize),

    #[error("eigenpair residual {residual} exceeds {tol} times the matrix norm")]
    EigResidual { residual: T, tol: T },

    #[error("matrix exponential input has non-finite entries or overflowing norm {0}")]
    ExpmOverflow(T),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("Floquet GBZ did not converge by cutoff l_c = {cutoff}; partial result attached")]
    CutoffNonConvergence {
        cutoff: u32,
        partial: Box<FloquetGbz<T>>,
    },

    #[error("bracket ({lo}, {hi}) does not straddle a touching event: d(lo) = {d_lo}, d(hi) = {d_hi}")]
    BracketError { lo: T, hi: T, d_lo: T, d_hi: T },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("missing parameter `{key}` for model `{model}`")]
    MissingParam { key: String, model: String },

    #[error("invalid parameter `{key}` = {value}: {reason}")]
    InvalidParam {
        key: String,
        value: f64,
        reason: String,
    },

    #[error("empty spectrum")]
    EmptySpectrum,

    #[error("empty point set")]
    EmptyPointSet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<X, T> = std::result::Result<X, Error<T>>;
