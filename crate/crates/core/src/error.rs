//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("edge {0}-{1} has non-positive weight {2}")]
    NonpositiveWeight(usize, usize, f64),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("operation requires an undirected graph")]
    DirectedGraphUnsupported,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("edge probabilities must be positive and sum to 1 (sum = {0})")]
    ProbabilityNotNormalized(f64),
    #[error("gauge form requested on a graph that is not structurally balanced")]
    GaugeRequestedOnUnbalancedGraph,
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("positive subgraph is not connected")]
    PositiveSubgraphDisconnected,
    #[error("alpha = {alpha} outside the admissible range (0, {max})")]
    AlphaOutOfRange { alpha: f64, max: f64 },
    #[error("parameters are outside the convergence regime: {0}")]
    NotInConvergenceRegime(String),
    #[error("eigenvalue 1 is not simple")]
    EigenvalueOneNotSimple,
    #[error("step condition violated at step {step}, node {node} (delta = {delta})")]
    StepConditionViolated { step: usize, node: usize, delta: f64 },
    #[error("trajectory was recorded without monitors")]
    MonitorsMissing,
    #[error("parameter range violation: {0}")]
    ParameterRangeViolation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {msg} (token `{token}`)")]
    Parse {
        line: usize,
        token: String,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
