//! Hierarchical core-periphery importance sampling for minibatch GCN training.
//!
//! The crate is organised around one immutable [`Graph`]:
//!
//! - [`partition`] splits it into a high-degree core and a low-degree
//!   periphery with a single degree threshold,
//! - [`sampling`] draws node-induced subgraphs (HIS-FF, HIS-RW and the
//!   GraphSAINT / uniform baselines) and the loss-normalization counters,
//! - [`curvature`] computes exact Ollivier-Ricci curvature and its localized
//!   lower bound,
//! - [`metrics`] measures chain preservation and node aggregation variance.

pub mod curvature;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod sampling;

pub use error::{Error, Result};
pub use graph::{induced_subgraph, Features, Graph, Labels, NodeId, Subgraph};
pub use partition::{compute_degree_threshold, partition_graph, CorePeripheryPartition};
