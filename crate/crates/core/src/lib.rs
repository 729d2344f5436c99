//! Online overlapping community detection.
//!
//! [`clag`] partitions a graph into `k` disjoint communities with an online,
//! k-means-like pass over the nodes in which each community is a probability
//! measure and nodes are scored by one-step random-walk overlap. [`overlap`]
//! turns the partition into overlapping communities by asking which
//! communities a single walk step is likely to have come from.
//! [`metrics`] scores the results and [`bench`] provides test graphs.

pub mod bench;
pub mod clag;
pub mod cli;
pub mod cover;
pub mod error;
pub mod graph;
pub mod io;
pub mod measure;
pub mod metrics;
pub mod overlap;
pub mod partition;

pub use clag::{fit, fit_with_restarts, ClagConfig, ClagFit, ClagState, Cost};
pub use cover::Cover;
pub use error::{Error, Result};
pub use graph::{load_edge_list, Graph, NodeId};
pub use measure::SparseMeasure;
pub use overlap::{derive_cover, run_clago, OverlapOptions};
pub use partition::Partition;
