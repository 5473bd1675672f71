use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    InvalidNode { node: usize, node_count: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a tree")]
    NotATree,

    #[error("node {to} is unreachable from node {from}")]
    Unreachable { from: usize, to: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("connected Erdos-Renyi graph not found after {0} attempts")]
    RetryCapExhausted(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid observations: {0}")]
    InvalidObservations(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("inconsistent Gromov matrix at entry ({row}, {col}): {message}")]
    InconsistentGromovMatrix { row: usize, col: usize, message: String },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("normal equations are singular")]
    SingularNormalEquations,

    #[error("no feasible source candidate")]
    NoFeasibleCandidate,

    #[error("objective is infinite on the whole unit interval")]
    InfiniteObjective,

    #[error("source placement constraint unsatisfiable after {0} attempts")]
    SourcePlacement(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
