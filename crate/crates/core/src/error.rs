use thiserror::Error;

use crate::multigraph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {index} has negative cost {cost}")]
    InvalidCost { index: usize, cost: String },
    #[error("node {node} out of range 1..={node_count}")]
    InvalidNode { node: usize, node_count: usize },
    #[error("graph needs at least 2 nodes, got {0}")]
    TooSmall(usize),
    #[error("InfeasibleInstance: input graph is not 2-edge-connected")]
    InfeasibleInstance,
    #[error("no eligible edge left before the forest collapsed to one node")]
    NoEligibleEdge,
    #[error("edge set is not spanning and 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("edge {0} is not part of the solution")]
    NotInSolution(EdgeId),
    #[error("corrupt grow trace: {0}")]
    CorruptTrace(String),
    #[error("dual constraint of kept edge {0} is not tight")]
    CertificateMismatch(EdgeId),
    #[error("instance has {0} edges; the exact oracle is limited to 24")]
    TooLargeForOracle(usize),
    #[error("random instance needs m >= n (n = {n}, m = {m})")]
    TooSparse { n: usize, m: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
