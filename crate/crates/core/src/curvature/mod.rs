//! Edge curvature: the localized lower bound, exact Ollivier-Ricci
//! curvature, and averaging over a graph or a batch of subgraphs.

mod average;
mod localized;
mod ollivier;
pub mod transport;

pub use average::{
    average_curvature, average_subgraph_curvature, edge_curvatures, graph_curvature, subgraph_curvature, CurvatureMode, CurvatureSummary,
    EdgeCurvature, Pooling, EXACT_DEGREE_LIMIT,
};
pub use localized::localized_curvature_bound;
pub use ollivier::{exact_orc, exact_orc_solution, local_distance, OrcSolution, OrcWorkspace};
