//! Consensus dynamics over signed networks.
//!
//! Nodes are indexed from 0 throughout the library API; the text graph
//! format and the command line use 1-based ids.

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deterministic;
pub mod error;
pub mod fixtures;
pub mod gossip;
pub mod graph;
pub mod laplacian;
pub mod matrix;
pub mod report;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{BalanceResult, BalanceVerdict, GraphDiagnostics, Sign, SignedEdge, SignedGraph};
pub use matrix::Matrix;
