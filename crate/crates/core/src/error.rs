//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by lattice, cell, catalog, and tiling operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vector had a different number of coordinates than the operation expected.
    #[error("coordinate count mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    /// An index (basis vector, orbit label, coordinate slot) was out of range.
    #[error("index {index} out of range (valid: {valid})")]
    IndexOutOfRange { index: usize, valid: String },

    /// The requested operation is not defined at this rank.
    #[error("rank n = {n} unsupported here: {reason}")]
    UnsupportedRank { n: usize, reason: String },

    /// A point claimed to be a Voronoi-cell vertex failed validation.
    #[error("not a vertex of the Voronoi cell: {details}")]
    NotAVoronoiVertex { details: String },

    /// A point expected to lie in the root lattice does not.
    #[error("not a root-lattice point: coordinate sum {sum} is not divisible by {modulus}")]
    NotARootPoint { sum: i64, modulus: i64 },

    /// Input failed a structural precondition (duplicate labels, empty set, bad sign string).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
