use thiserror::Error;

use crate::partition::Cell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parts must be non-increasing, got {0:?}")]
    NotAPartition(Vec<u64>),

    #[error("path vertex {index} leaves the non-negative quadrant")]
    NegativeCoordinate { index: usize },

    #[error("path has unsupported endpoints: {0}")]
    BadEndpoints(String),

    #[error("cell set is not closed under the diagram order")]
    NotFerrers,

    #[error("cell {0:?} lies outside the matrix support")]
    OutOfSupport(Cell),

    #[error("growth precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("filling shape does not match the shape of the path")]
    ShapeMismatch,

    #[error("sequence is not in the image of RSK: {0}")]
    NotInImage(String),

    #[error("path or filling is not symmetric")]
    NotSymmetric,

    #[error("enumeration budget of {budget} states exceeded")]
    TooLarge { budget: u64 },

    #[error("chains are not pairwise disjoint")]
    NotDisjoint,

    #[error("vertex sequence is not a chain: {0:?}")]
    NotAChain(Vec<Cell>),

    #[error("chain is not contained in the diagram")]
    ChainNotContained,

    #[error("straightened paths lost weight: {paths} < {chains}")]
    NotOptimal { chains: u64, paths: u64 },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("expected {expected} partitions, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("enumeration of {needed} configurations exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
