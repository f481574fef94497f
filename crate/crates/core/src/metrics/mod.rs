//! Chain preservation and node-aggregation variance of sampled subgraphs.

mod chains;
mod forward;
mod variance;

pub use chains::{
    chain_preservation_rate, count_chains, enumerate_chains, ChainReport, ChainSet, Chain,
    DEFAULT_CHAIN_CAP,
};
pub use forward::{forward_pass, restrict_features, ForwardConfig, ForwardWeights, Matrix};
pub use variance::{aggregation_variance, aggregation_variance_with, VarianceReport};
