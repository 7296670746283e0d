use thiserror::Error;

/// Errors raised by every layer of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("homology in degree {degree} has free rank {free_rank}; Euler characteristic undefined")]
    InfiniteHomology { degree: usize, free_rank: usize },

    #[error("boundary composite d_{index} * d_{next} is nonzero", next = .index + 1)]
    CompositeNonzero { index: usize },

    #[error("{0} is not a unit of the p-adic Laurent Tate algebra")]
    NotAUnit(String),

    #[error("zero input: {0}")]
    ZeroInput(&'static str),

    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("argument outside the convergence radius of the p-adic exponential (valuation {valuation}, need >= {required})")]
    ConvergenceRadius { valuation: i64, required: i64 },

    #[error("working precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("module is not p-adically expansive: {0}")]
    NotExpansive(String),

    #[error("expansiveness could not be decided: {0}")]
    Inconclusive(String),

    #[error("complex is not rationally acyclic (degree {degree} has Betti number {betti})")]
    NotAcyclic { degree: usize, betti: usize },

    #[error("determinant vanishes at level {level} (index {index})")]
    ZeroDeterminant { level: usize, index: u64 },

    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("invalid subgroup sequence: {0}")]
    InvalidSequence(String),

    #[error("routes disagree: {0}")]
    RouteMismatch(String),

    #[error("inexact division of Laurent polynomials")]
    InexactDivision,

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        }
    }
}
