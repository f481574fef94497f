use crate::error::{Error, Result};
use crate::graph::Graph;

/// Closed-form lower bound on the curvature of edge (x, y) from endpoint
/// degrees and the triangle count `Δ` through the edge:
///
/// `-(1 - 1/d_x - 1/d_y - Δ/min)_+ - (1 - 1/d_x - 1/d_y - Δ/max)_+ + Δ/max`
pub fn localized_curvature_bound(graph: &Graph, x: usize, y: usize) -> Result<f64> {
    if x >= graph.node_count() || y >= graph.node_count() || !graph.has_edge(x, y) {
        return Err(Error::EdgeNotFound(x, y));
    }
    let (dx, dy) = (graph.degree(x) as f64, graph.degree(y) as f64);
    let triangles = graph.common_neighbor_count(x, y) as f64;
    Ok(bound_from_counts(dx, dy, triangles))
}

pub(crate) fn bound_from_counts(dx: f64, dy: f64, triangles: f64) -> f64 {
    let (lo, hi) = (dx.min(dy), dx.max(dy));
    let base = 1.0 - 1.0 / dx - 1.0 / dy;
    -(base - triangles / lo).max(0.0) - (base - triangles / hi).max(0.0) + triangles / hi
}
