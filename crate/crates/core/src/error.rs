//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in exact arithmetic (rerun with arbitrary precision)")]
    Overflow,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has a zero row or column (vertex {0} is stranded); the graph is not essential")]
    ZeroRowOrColumn(usize),

    #[error("negative entry at ({0},{1}); transition matrices must be nonnegative")]
    NegativeEntry(usize, usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("vertices {0:?} are not amalgamable: their in-edge columns differ")]
    NotAmalgamable(Vec<usize>),

    #[error("empty chain")]
    EmptyChain,

    #[error("search space of {candidates} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { candidates: u128, cap: u128 },

    #[error("word count {count} exceeds the cap of {cap}")]
    ExplosionGuard { count: u128, cap: u128 },

    #[error("matrix does not induce a homomorphism of cokernels: no integral certificate")]
    NotWellDefined,

    #[error("branch index {branch} out of range 1..={arity}")]
    BranchOutOfRange { branch: usize, arity: usize },

    #[error("witness side mismatch: {0}")]
    SideMismatch(String),

    #[error("required pair ({0},{1}) is not an edge of the bipartite graph")]
    UnpairedPath(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
