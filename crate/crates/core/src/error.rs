use thiserror::Error;

use crate::bits::BitState;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bit vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("site index {index} out of range 1..={len}")]
    SiteOutOfRange { index: usize, len: usize },

    #[error("lattice size {len} is not supported (allowed 1..={max})")]
    UnsupportedLength { len: usize, max: usize },

    #[error("vector of length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense construction capped at L = {max}; requested L = {len}")]
    DenseCap { len: usize, max: usize },

    #[error("{what} is only feasible up to L = {max}; requested L = {len}")]
    Infeasible { what: String, len: usize, max: usize },

    #[error("pivot form vanishes at witness {witness} (parameter point on a resonance locus)")]
    Resonance { witness: BitState },

    #[error("alpha must be nonzero for the transfer-matrix recursion")]
    ZeroAlpha,

    #[error("missing value for symbol {0}")]
    MissingSymbol(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
