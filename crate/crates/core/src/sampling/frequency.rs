//! Appearance counters over a batch of subgraphs and the loss-normalization
//! coefficients derived from them.

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyCounters {
    pub n_subgraphs: usize,
    /// `C_v` per node.
    pub node_counts: Vec<u32>,
    /// `C_uv` per undirected edge, indexed by [`Graph::edge_id`].
    pub edge_counts: Vec<u32>,
}

/// Counts node and edge appearances across `subgraphs` of `graph`.
pub fn accumulate_frequencies<'a, I>(graph: &Graph, subgraphs: I) -> Result<FrequencyCounters>
where
    I: IntoIterator<Item = &'a Subgraph>,
{
    let mut node_counts = vec![0u32; graph.node_count()];
    let mut edge_counts = vec![0u32; graph.edge_count()];
    let mut n_subgraphs = 0;
    for sub in subgraphs {
        n_subgraphs += 1;
        for &v in sub.global_ids() {
            let v = v as usize;
            if v >= graph.node_count() {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    node_count: graph.node_count(),
                });
            }
            node_counts[v] += 1;
        }
        for (u, v) in sub.global_edges() {
            let e = graph
                .edge_id(u, v)
                .ok_or(Error::EdgeNotFound(u, v))?;
            edge_counts[e] += 1;
        }
    }
    Ok(FrequencyCounters {
        n_subgraphs,
        node_counts,
        edge_counts,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormCoefficients {
    /// `λ_v = C_v / n`; `None` for nodes never sampled.
    pub lambda: Vec<Option<f64>>,
    /// `(u, v, α)` with `α = C_uv / C_v` for every sampled edge in both
    /// directions, ordered by edge id then direction.
    pub alpha: Vec<(usize, usize, f64)>,
}

impl NormCoefficients {
    pub fn unseen_nodes(&self) -> usize {
        self.lambda.iter().filter(|l| l.is_none()).count()
    }
}

pub fn compute_norm_coefficients(graph: &Graph, counters: &FrequencyCounters) -> Result<NormCoefficients> {
    if counters.n_subgraphs == 0 {
        return Err(Error::InvalidParameter(
            "normalization needs at least one subgraph".into(),
        ));
    }
    let n = counters.n_subgraphs as f64;
    let lambda = counters
        .node_counts
        .iter()
        .map(|&c| (c > 0).then(|| f64::from(c) / n))
        .collect();
    let mut alpha = Vec::new();
    for (e, (u, v)) in graph.edges().enumerate() {
        let c = counters.edge_counts[e];
        if c == 0 {
            continue;
        }
        let c = f64::from(c);
        alpha.push((u, v, c / f64::from(counters.node_counts[v])));
        alpha.push((v, u, c / f64::from(counters.node_counts[u])));
    }
    Ok(NormCoefficients { lambda, alpha })
}
