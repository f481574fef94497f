use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::localized::localized_curvature_bound;
use super::ollivier::{exact_orc_solution, OrcWorkspace};
use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};

/// Exact mode refuses graphs whose maximum degree exceeds this unless forced.
pub const EXACT_DEGREE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureMode {
    Exact,
    Localized,
}

impl CurvatureMode {
    pub fn name(self) -> &'static str {
        match self {
            CurvatureMode::Exact => "exact",
            CurvatureMode::Localized => "localized",
        }
    }
}

impl fmt::Display for CurvatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurvatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CurvatureMode::Exact),
            "localized" => Ok(CurvatureMode::Localized),
            _ => Err(Error::InvalidParameter(format!("unknown curvature mode `{s}`"))),
        }
    }
}

/// How subgraph-scope averages combine edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pooling {
    /// Every edge occurrence in every subgraph counts once.
    #[default]
    Occurrences,
    /// Mean of per-subgraph means.
    PerSubgraphMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCurvature {
    pub u: usize,
    pub v: usize,
    pub localized_bound: f64,
    pub exact: Option<f64>,
}

impl EdgeCurvature {
    pub fn value(&self, mode: CurvatureMode) -> f64 {
        match mode {
            CurvatureMode::Exact => self.exact.unwrap_or(f64::NAN),
            CurvatureMode::Localized => self.localized_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub mean: f64,
    /// Edges (or edge occurrences) averaged over.
    pub count: usize,
    /// Subgraphs that contributed; zero in graph scope.
    pub subgraphs: usize,
    pub mode: CurvatureMode,
    pub pooling: Option<Pooling>,
}

fn guard(graph: &Graph, mode: CurvatureMode, force: bool) -> Result<()> {
    if mode == CurvatureMode::Exact && !force && graph.max_degree() > EXACT_DEGREE_LIMIT {
        return Err(Error::DegreeGuard {
            max_degree: graph.max_degree(),
            limit: EXACT_DEGREE_LIMIT,
        });
    }
    Ok(())
}

/// Curvature of each listed edge, in input order. The localized bound is
/// always filled; the exact value only in exact mode.
pub fn edge_curvatures(
    graph: &Graph,
    edges: &[(usize, usize)],
    mode: CurvatureMode,
    force: bool,
) -> Result<Vec<EdgeCurvature>> {
    guard(graph, mode, force)?;
    edges
        .par_iter()
        .map_init(
            || OrcWorkspace::new(graph.node_count()),
            |ws, &(u, v)| {
                let localized_bound = localized_curvature_bound(graph, u, v)?;
                let exact = match mode {
                    CurvatureMode::Exact => Some(exact_orc_solution(graph, ws, u, v)?.curvature()),
                    CurvatureMode::Localized => None,
                };
                Ok(EdgeCurvature {
                    u,
                    v,
                    localized_bound,
                    exact,
                })
            },
        )
        .collect()
}

/// Mean curvature over every edge of `graph`.
pub fn average_curvature(graph: &Graph, mode: CurvatureMode, force: bool) -> Result<CurvatureSummary> {
    graph_curvature(graph, mode, force).map(|(s, _)| s)
}

/// [`average_curvature`] plus the curvature of every edge, in edge-id order.
pub fn graph_curvature(
    graph: &Graph,
    mode: CurvatureMode,
    force: bool,
) -> Result<(CurvatureSummary, Vec<EdgeCurvature>)> {
    let edges: Vec<_> = graph.edges().collect();
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let values = edge_curvatures(graph, &edges, mode, force)?;
    let sum: f64 = values.iter().map(|c| c.value(mode)).sum();
    let summary = CurvatureSummary {
        mean: sum / values.len() as f64,
        count: values.len(),
        subgraphs: 0,
        mode,
        pooling: None,
    };
    Ok((summary, values))
}

/// Mean parent-graph curvature of the edges of `subgraphs`. Subgraphs with
/// no edges are skipped; each distinct edge is evaluated once.
pub fn average_subgraph_curvature(
    graph: &Graph,
    subgraphs: &[Subgraph],
    mode: CurvatureMode,
    pooling: Pooling,
    force: bool,
) -> Result<CurvatureSummary> {
    subgraph_curvature(graph, subgraphs, mode, pooling, force).map(|(s, _)| s)
}

/// [`average_subgraph_curvature`] plus the curvature of every distinct
/// edge that occurs, in edge-id order.
pub fn subgraph_curvature(
    graph: &Graph,
    subgraphs: &[Subgraph],
    mode: CurvatureMode,
    pooling: Pooling,
    force: bool,
) -> Result<(CurvatureSummary, Vec<EdgeCurvature>)> {
    guard(graph, mode, force)?;
    let mut needed = vec![false; graph.edge_count()];
    let mut occurrences: Vec<Vec<usize>> = Vec::with_capacity(subgraphs.len());
    for sub in subgraphs {
        let mut ids = Vec::with_capacity(sub.edge_count());
        for (u, v) in sub.global_edges() {
            let e = graph.edge_id(u, v).ok_or(Error::EdgeNotFound(u, v))?;
            needed[e] = true;
            ids.push(e);
        }
        occurrences.push(ids);
    }
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .zip(&needed)
        .filter_map(|(e, &n)| n.then_some(e))
        .collect();
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let computed = edge_curvatures(graph, &edges, mode, force)?;
    let mut value = vec![f64::NAN; graph.edge_count()];
    let mut slot = computed.iter();
    for (e, &n) in needed.iter().enumerate() {
        if n {
            value[e] = slot.next().map(|c| c.value(mode)).unwrap_or(f64::NAN);
        }
    }

    let nonempty = occurrences.iter().filter(|o| !o.is_empty());
    let (mean, count, used) = match pooling {
        Pooling::Occurrences => {
            let (mut sum, mut count, mut used) = (0.0, 0usize, 0usize);
            for ids in nonempty {
                used += 1;
                count += ids.len();
                sum += ids.iter().map(|&e| value[e]).sum::<f64>();
            }
            (sum / count as f64, count, used)
        }
        Pooling::PerSubgraphMean => {
            let (mut sum, mut count, mut used) = (0.0, 0usize, 0usize);
            for ids in nonempty {
                used += 1;
                count += ids.len();
                sum += ids.iter().map(|&e| value[e]).sum::<f64>() / ids.len() as f64;
            }
            (sum / used as f64, count, used)
        }
    };
    let summary = CurvatureSummary {
        mean,
        count,
        subgraphs: used,
        mode,
        pooling: Some(pooling),
    };
    Ok((summary, computed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{generate_ba, induced_subgraph};

    #[test]
    fn triangle_average() {
        let s = average_curvature(&triangle(), CurvatureMode::Exact, false).unwrap();
        assert_eq!((s.mean, s.count), (0.5, 3));
        let s = average_curvature(&triangle(), CurvatureMode::Localized, false).unwrap();
        assert_eq!(s.mean, 0.5);
    }

    #[test]
    fn subgraph_pooling() {
        // path 0-1-2-3 plus triangle 4-5-6
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        let a = induced_subgraph(&g, [4, 5, 6]).unwrap();
        let b = induced_subgraph(&g, [1, 2]).unwrap();
        let empty = induced_subgraph(&g, [0, 3]).unwrap();
        let subs = [a, b, empty];
        let pooled =
            average_subgraph_curvature(&g, &subs, CurvatureMode::Exact, Pooling::Occurrences, false).unwrap();
        // three edges at 1/2, one at 0
        assert_eq!((pooled.mean, pooled.count, pooled.subgraphs), (0.375, 4, 2));
        let per =
            average_subgraph_curvature(&g, &subs, CurvatureMode::Exact, Pooling::PerSubgraphMean, false)
                .unwrap();
        assert_eq!(per.mean, 0.25);
    }

    #[test]
    fn empty_edge_set() {
        let g = path(4);
        let subs = [induced_subgraph(&g, [0, 2]).unwrap()];
        assert!(matches!(
            average_subgraph_curvature(&g, &subs, CurvatureMode::Exact, Pooling::Occurrences, false),
            Err(Error::EmptyEdgeSet)
        ));
    }

    #[test]
    fn degree_guard() {
        let g = star(EXACT_DEGREE_LIMIT + 1);
        assert!(matches!(
            average_curvature(&g, CurvatureMode::Exact, false),
            Err(Error::DegreeGuard { .. })
        ));
        assert!(average_curvature(&g, CurvatureMode::Localized, false).is_ok());
    }

    #[test]
    fn bound_never_exceeds_exact() {
        let g = generate_ba(300, 3, 11).unwrap();
        let edges: Vec<_> = g.edges().collect();
        for c in edge_curvatures(&g, &edges, CurvatureMode::Exact, false).unwrap() {
            let k = c.exact.unwrap();
            assert!(c.localized_bound <= k + 1e-9, "{c:?}");
            assert!((-2.0..=1.0).contains(&k));
        }
    }

    #[test]
    fn mode_names() {
        for m in [CurvatureMode::Exact, CurvatureMode::Localized] {
            assert_eq!(m.name().parse::<CurvatureMode>().unwrap(), m);
        }
        assert!("lazy".parse::<CurvatureMode>().is_err());
    }
}
