//! Comparison samplers: GraphSAINT edge and random-walk samplers and uniform
//! node sampling.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::Rng;

use super::{NodeOrigin, ResolvedConfig, SampleOutcome};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Edge distribution `p(u, v) ∝ 1/d_u + 1/d_v`, built once per graph.
#[derive(Debug, Clone)]
pub struct SaintEdgeTable {
    edges: Vec<(NodeId, NodeId)>,
    index: WeightedIndex<f64>,
    touched_nodes: usize,
}

impl SaintEdgeTable {
    pub fn new(graph: &Graph) -> Result<Self> {
        let edges: Vec<(NodeId, NodeId)> = graph
            .edges()
            .map(|(u, v)| (u as NodeId, v as NodeId))
            .collect();
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let weights = edges.iter().map(|&(u, v)| {
            1.0 / graph.degree(u as usize) as f64 + 1.0 / graph.degree(v as usize) as f64
        });
        let index = WeightedIndex::new(weights).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let touched_nodes = (0..graph.node_count()).filter(|&v| graph.degree(v) > 0).count();
        Ok(Self {
            edges,
            index,
            touched_nodes,
        })
    }

    /// Probability of drawing edge `i` (edge-id order).
    pub fn probability(&self, i: usize) -> f64 {
        let w = self.index.weight(i).unwrap_or(0.0);
        w / self.index.total_weight()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Draws edges with replacement and induces on their endpoints.
///
/// With an edge budget exactly that many edges are drawn; without one,
/// edges are drawn until the endpoint set reaches the target size.
pub fn sample_saint_edge<R: Rng + ?Sized>(
    graph: &Graph,
    table: &SaintEdgeTable,
    config: &ResolvedConfig,
    rng: &mut R,
) -> Result<SampleOutcome> {
    let mut nodes: HashSet<NodeId> = HashSet::new();
    let draw = |nodes: &mut HashSet<NodeId>, rng: &mut R| {
        let (u, v) = table.edges[table.index.sample(rng)];
        nodes.insert(u);
        nodes.insert(v);
    };
    let mut truncated = false;
    match config.edge_budget {
        Some(budget) => (0..budget).for_each(|_| draw(&mut nodes, rng)),
        None => {
            if config.target > table.touched_nodes {
                truncated = true;
            }
            let goal = config.target.min(table.touched_nodes);
            while nodes.len() < goal {
                draw(&mut nodes, rng);
            }
        }
    }
    let members = nodes.into_iter().map(|v| (v, NodeOrigin::Baseline)).collect();
    SampleOutcome::from_members(graph, members, truncated)
}

/// Uniform-root random walks of `h` uniform-neighbor hops.
///
/// With a root count exactly that many walkers run; without one, walkers are
/// launched until the visited set reaches the target size.
pub fn sample_saint_rw<R: Rng + ?Sized>(
    graph: &Graph,
    config: &ResolvedConfig,
    rng: &mut R,
) -> Result<SampleOutcome> {
    let n = graph.node_count();
    let mut nodes: HashSet<NodeId> = HashSet::new();
    let walk = |nodes: &mut HashSet<NodeId>, rng: &mut R| {
        let mut v = rng.random_range(0..n);
        nodes.insert(v as NodeId);
        for _ in 0..config.walk_length {
            let nbrs = graph.neighbors(v);
            if nbrs.is_empty() {
                break;
            }
            v = nbrs[rng.random_range(0..nbrs.len())] as usize;
            nodes.insert(v as NodeId);
        }
    };
    match config.roots {
        Some(r) => (0..r).for_each(|_| walk(&mut nodes, rng)),
        None => {
            while nodes.len() < config.target {
                walk(&mut nodes, rng);
            }
        }
    }
    let members = nodes.into_iter().map(|v| (v, NodeOrigin::Baseline)).collect();
    SampleOutcome::from_members(graph, members, false)
}

/// `n̂` distinct nodes uniformly without replacement.
pub fn sample_uniform_node<R: Rng + ?Sized>(
    graph: &Graph,
    config: &ResolvedConfig,
    rng: &mut R,
) -> Result<SampleOutcome> {
    let n = graph.node_count();
    if config.target > n {
        return Err(Error::InvalidParameter(format!(
            "target size {} exceeds node count {n}",
            config.target
        )));
    }
    let members = rand::seq::index::sample(rng, n, config.target)
        .into_iter()
        .map(|v| (v as NodeId, NodeOrigin::Baseline))
        .collect();
    SampleOutcome::from_members(graph, members, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::sampling::{subgraph_rng, Method, SampleSize, SamplerConfig};

    fn cfg(method: Method, size: usize) -> SamplerConfig {
        SamplerConfig::new(method, SampleSize::Nodes(size), 0)
    }

    #[test]
    fn star_edges_uniform() {
        let g = star(5);
        let t = SaintEdgeTable::new(&g).unwrap();
        for i in 0..5 {
            assert!((t.probability(i) - 0.2).abs() < 1e-12);
        }
        let c = cycle(6);
        let t = SaintEdgeTable::new(&c).unwrap();
        for i in 0..6 {
            assert!((t.probability(i) - 1.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_one_on_triangle() {
        let g = triangle();
        let t = SaintEdgeTable::new(&g).unwrap();
        let mut c = cfg(Method::SaintEdge, 1);
        c.edge_budget = Some(1);
        let c = c.resolve(&g).unwrap();
        let out = sample_saint_edge(&g, &t, &c, &mut subgraph_rng(0, 0)).unwrap();
        assert_eq!((out.subgraph.node_count(), out.subgraph.edge_count()), (2, 1));

        // budgets beyond |E| collapse duplicates
        let mut c = cfg(Method::SaintEdge, 1);
        c.edge_budget = Some(50);
        let c = c.resolve(&g).unwrap();
        let out = sample_saint_edge(&g, &t, &c, &mut subgraph_rng(0, 1)).unwrap();
        assert_eq!(out.subgraph.node_count(), 3);
    }

    #[test]
    fn saint_edge_fill_mode_reaches_target() {
        let g = path(30);
        let t = SaintEdgeTable::new(&g).unwrap();
        let c = cfg(Method::SaintEdge, 10).resolve(&g).unwrap();
        let out = sample_saint_edge(&g, &t, &c, &mut subgraph_rng(2, 0)).unwrap();
        assert!((10..=11).contains(&out.subgraph.node_count()));
    }

    #[test]
    fn saint_rw_counts() {
        let g = cycle(20);
        let mut c = cfg(Method::SaintRw, 1);
        c.roots = Some(1);
        c.walk_length = 0;
        let r = c.resolve(&g).unwrap();
        let out = sample_saint_rw(&g, &r, &mut subgraph_rng(0, 0)).unwrap();
        assert_eq!(out.subgraph.node_count(), 1);

        c.roots = Some(3);
        c.walk_length = 4;
        let r = c.resolve(&g).unwrap();
        for i in 0..50 {
            let out = sample_saint_rw(&g, &r, &mut subgraph_rng(1, i)).unwrap();
            assert!(out.subgraph.node_count() <= 3 * 5);
        }
    }

    #[test]
    fn uniform_node_cases() {
        let g = cycle(4);
        let full = cfg(Method::UniformNode, 4).resolve(&g).unwrap();
        let out = sample_uniform_node(&g, &full, &mut subgraph_rng(0, 0)).unwrap();
        assert_eq!(out.subgraph.edge_count(), 4);

        let one = cfg(Method::UniformNode, 1).resolve(&g).unwrap();
        let out = sample_uniform_node(&g, &one, &mut subgraph_rng(0, 0)).unwrap();
        assert_eq!((out.subgraph.node_count(), out.subgraph.edge_count()), (1, 0));

        assert!(cfg(Method::UniformNode, 5).resolve(&g).is_err());

        let two = cfg(Method::UniformNode, 2).resolve(&g).unwrap();
        let mut hits = [0usize; 4];
        let draws = 10_000;
        for i in 0..draws {
            let out = sample_uniform_node(&g, &two, &mut subgraph_rng(7, i)).unwrap();
            for &v in out.subgraph.global_ids() {
                hits[v as usize] += 1;
            }
        }
        for h in hits {
            let f = h as f64 / draws as f64;
            assert!((f - 0.5).abs() <= 0.02, "{f}");
        }
    }
}
