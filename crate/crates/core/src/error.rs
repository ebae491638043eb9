use thiserror::Error;

use crate::lattice::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("rank parameter l = {l} is below the bound l >= {min} for {family}")]
    InvalidRank { family: Family, l: u32, min: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{value} is not in the lattice (1/{denominator})Z")]
    OffLattice { value: String, denominator: u32 },

    #[error("series mismatch: {0}")]
    SeriesMismatch(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadratic form is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
