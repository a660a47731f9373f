use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("lattice is not a sublattice of the ambient lattice")]
    NotSublattice,

    #[error("coset index {index} exceeds the cap of {cap}")]
    IndexOverflow { index: BigInt, cap: u64 },

    #[error("enumeration budget exceeded: {needed} candidates > budget {budget}")]
    BudgetExceeded { needed: BigInt, budget: u64 },

    #[error("the forbidden sublattices cover the lattice; the admissible set is empty")]
    EmptyAdmissibleSet,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),

    #[error("packing condition violated: {0}")]
    PackingViolated(String),

    #[error("certified radius {radius} did not contain {wanted} independent admissible points")]
    CertificateViolated { radius: String, wanted: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
