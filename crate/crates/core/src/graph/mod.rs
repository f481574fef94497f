//! Immutable undirected graphs in compressed sparse row form, plus
//! node-induced subgraphs.
//!
//! Every loader and generator funnels through [`Graph::from_edges`], which
//! symmetrizes arcs, drops self-loops and collapses duplicate edges, so the
//! rest of the crate can assume a simple graph with sorted neighbor lists.

mod generate;
mod io;

pub use generate::generate_ba;
pub use io::{
    load_edge_list, load_features, load_labels, parse_edge_list, write_binary_features, LoadOptions,
};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Dense row-major feature matrix, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl Features {
    pub fn new(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                what: "feature buffer length",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![1.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    fn row_norm(&self, i: usize) -> f64 {
        self.row(i)
            .iter()
            .map(|&x| f64::from(x) * f64::from(x))
            .sum::<f64>()
            .sqrt()
    }
}

/// Node labels: one class id per node, or a multi-hot row per node.
#[derive(Debug, Clone, PartialEq)]
pub enum Labels {
    Single(Vec<Option<u32>>),
    MultiHot { classes: usize, rows: Vec<Vec<u8>> },
}

#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    /// `upper_prefix[v]` = number of edges (u, w) with u < w and u < v.
    upper_prefix: Vec<usize>,
    external_ids: Vec<u64>,
    features: Option<Features>,
    feature_norms: Vec<f64>,
    labels: Option<Labels>,
}

impl Graph {
    /// Builds a simple undirected graph on `node_count` nodes.
    ///
    /// Arcs are symmetrized, self-loops dropped and duplicates collapsed.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node: w,
                        node_count,
                    });
                }
            }
            if u == v {
                continue;
            }
            adj[u].push(v as NodeId);
            adj[v].push(u as NodeId);
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Ok(Self::from_csr(
            offsets,
            neighbors,
            (0..node_count as u64).collect(),
        ))
    }

    fn from_csr(offsets: Vec<usize>, neighbors: Vec<NodeId>, external_ids: Vec<u64>) -> Self {
        let n = offsets.len() - 1;
        let mut upper_prefix = Vec::with_capacity(n + 1);
        upper_prefix.push(0);
        let mut acc = 0;
        for v in 0..n {
            let nbrs = &neighbors[offsets[v]..offsets[v + 1]];
            acc += nbrs.len() - nbrs.partition_point(|&w| (w as usize) <= v);
            upper_prefix.push(acc);
        }
        Self {
            offsets,
            neighbors,
            upper_prefix,
            external_ids,
            features: None,
            feature_norms: vec![1.0; n],
            labels: None,
        }
    }

    pub(crate) fn with_external_ids(mut self, ids: Vec<u64>) -> Self {
        debug_assert_eq!(ids.len(), self.node_count());
        self.external_ids = ids;
        self
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[NodeId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&(b as NodeId)).is_ok()
    }

    /// Dense id in `0..edge_count` of the undirected edge {u, v}.
    ///
    /// Ids follow the order of [`Graph::edges`].
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        if lo == hi || hi >= self.node_count() {
            return None;
        }
        let nbrs = self.neighbors(lo);
        let pos = nbrs.binary_search(&(hi as NodeId)).ok()?;
        let first_upper = nbrs.partition_point(|&w| (w as usize) <= lo);
        Some(self.upper_prefix[lo] + pos - first_upper)
    }

    /// Undirected edges as `(u, v)` with `u < v`, in edge-id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn external_id(&self, v: usize) -> u64 {
        self.external_ids[v]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    pub fn features(&self) -> Option<&Features> {
        self.features.as_ref()
    }

    /// Cached 2-norm of each node's feature row; 1.0 everywhere without features.
    pub fn feature_norms(&self) -> &[f64] {
        &self.feature_norms
    }

    #[inline]
    pub fn feature_norm(&self, v: usize) -> f64 {
        self.feature_norms[v]
    }

    pub fn set_features(&mut self, features: Features) -> Result<()> {
        if features.rows() != self.node_count() {
            return Err(Error::Dimension {
                what: "feature rows",
                expected: self.node_count(),
                found: features.rows(),
            });
        }
        self.feature_norms = (0..features.rows()).map(|i| features.row_norm(i)).collect();
        self.features = Some(features);
        Ok(())
    }

    pub fn clear_features(&mut self) {
        self.features = None;
        self.feature_norms = vec![1.0; self.node_count()];
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn set_labels(&mut self, labels: Labels) -> Result<()> {
        let found = match &labels {
            Labels::Single(v) => v.len(),
            Labels::MultiHot { rows, .. } => rows.len(),
        };
        if found != self.node_count() {
            return Err(Error::Dimension {
                what: "label rows",
                expected: self.node_count(),
                found,
            });
        }
        self.labels = Some(labels);
        Ok(())
    }

    /// Number of common neighbors of `u` and `v` (triangles through edge {u, v}).
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        sorted_intersection_count(self.neighbors(u), self.neighbors(v))
    }
}

pub(crate) fn sorted_intersection_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// A node-induced subgraph with local ids `0..len` mapped to sorted global ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    global_ids: Vec<NodeId>,
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
}

impl Subgraph {
    pub fn node_count(&self) -> usize {
        self.global_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn global_ids(&self) -> &[NodeId] {
        &self.global_ids
    }

    pub fn global_of(&self, local: usize) -> usize {
        self.global_ids[local] as usize
    }

    pub fn local_of(&self, global: usize) -> Option<usize> {
        self.global_ids.binary_search(&(global as NodeId)).ok()
    }

    pub fn contains(&self, global: usize) -> bool {
        self.local_of(global).is_some()
    }

    /// Local neighbor ids of local node `local`, sorted.
    pub fn local_neighbors(&self, local: usize) -> &[NodeId] {
        &self.neighbors[self.offsets[local]..self.offsets[local + 1]]
    }

    pub fn local_degree(&self, local: usize) -> usize {
        self.offsets[local + 1] - self.offsets[local]
    }

    /// Local edges `(i, j)` with `i < j`.
    pub fn local_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.local_neighbors(i)
                .iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Edges in global ids, `(u, v)` with `u < v`.
    pub fn global_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.local_edges()
            .map(|(i, j)| (self.global_of(i), self.global_of(j)))
    }
}

/// Node-induced subgraph of `graph` on `nodes` (duplicates ignored).
pub fn induced_subgraph<I>(graph: &Graph, nodes: I) -> Result<Subgraph>
where
    I: IntoIterator<Item = usize>,
{
    let n = graph.node_count();
    let mut global_ids = Vec::new();
    for v in nodes {
        if v >= n {
            return Err(Error::NodeOutOfRange {
                node: v,
                node_count: n,
            });
        }
        global_ids.push(v as NodeId);
    }
    global_ids.sort_unstable();
    global_ids.dedup();

    let mut offsets = Vec::with_capacity(global_ids.len() + 1);
    offsets.push(0);
    let mut neighbors = Vec::new();
    for &g in &global_ids {
        let nbrs = graph.neighbors(g as usize);
        if nbrs.len() <= global_ids.len() {
            for w in nbrs {
                if let Ok(j) = global_ids.binary_search(w) {
                    neighbors.push(j as NodeId);
                }
            }
        } else {
            for (j, w) in global_ids.iter().enumerate() {
                if nbrs.binary_search(w).is_ok() {
                    neighbors.push(j as NodeId);
                }
            }
        }
        offsets.push(neighbors.len());
    }
    Ok(Subgraph {
        global_ids,
        offsets,
        neighbors,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn from_edges_cleans_input() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.degree(1), 2);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn out_of_range_edge_rejected() {
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::NodeOutOfRange { node: 2, .. })
        ));
    }

    #[test]
    fn edge_ids_follow_edge_order() {
        let g = cycle(5);
        for (i, (u, v)) in g.edges().enumerate() {
            assert_eq!(g.edge_id(u, v), Some(i));
            assert_eq!(g.edge_id(v, u), Some(i));
        }
        assert_eq!(g.edge_id(0, 2), None);
        assert_eq!(g.edge_id(1, 1), None);
    }

    #[test]
    fn features_set_norms() {
        let mut g = triangle();
        assert_eq!(g.feature_norms(), &[1.0, 1.0, 1.0]);
        g.set_features(Features::ones(3, 2)).unwrap();
        for &n in g.feature_norms() {
            assert!((n - 2f64.sqrt()).abs() < 1e-12);
        }
        let err = g.set_features(Features::ones(4, 2)).unwrap_err();
        assert!(matches!(err, Error::Dimension { expected: 3, found: 4, .. }));
    }

    #[test]
    fn induced_examples() {
        let t = triangle();
        let s = induced_subgraph(&t, [0, 1]).unwrap();
        assert_eq!((s.node_count(), s.edge_count()), (2, 1));
        let s = induced_subgraph(&t, [2, 0, 1, 1]).unwrap();
        assert_eq!((s.node_count(), s.edge_count()), (3, 3));

        let p = path(4);
        let s = induced_subgraph(&p, [0, 2, 3]).unwrap();
        assert_eq!(s.global_edges().collect::<Vec<_>>(), vec![(2, 3)]);
        assert_eq!(s.local_of(2), Some(1));
        assert_eq!(s.local_of(1), None);

        assert!(matches!(
            induced_subgraph(&p, [7]),
            Err(Error::NodeOutOfRange { node: 7, .. })
        ));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..40).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..120)
                .prop_map(move |edges| Graph::from_edges(n, edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn degree_sum_is_twice_edges(g in arb_graph()) {
            let sum: usize = (0..g.node_count()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(sum, 2 * g.edge_count());
            for u in 0..g.node_count() {
                let nbrs = g.neighbors(u);
                prop_assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
                for &v in nbrs {
                    prop_assert!(g.neighbors(v as usize).contains(&(u as NodeId)));
                    prop_assert_ne!(v as usize, u);
                }
            }
        }

        #[test]
        fn induced_matches_brute_force(g in arb_graph(), mask in proptest::collection::vec(any::<bool>(), 40)) {
            let nodes: Vec<usize> = (0..g.node_count()).filter(|&v| mask[v]).collect();
            let s = induced_subgraph(&g, nodes.iter().copied()).unwrap();
            let expected: Vec<(usize, usize)> = g
                .edges()
                .filter(|&(u, v)| mask[u] && mask[v])
                .collect();
            let mut got: Vec<(usize, usize)> = s.global_edges().collect();
            got.sort_unstable();
            prop_assert_eq!(got, expected);
            for i in 0..s.node_count() {
                for &j in s.local_neighbors(i) {
                    prop_assert!(s.local_neighbors(j as usize).contains(&(i as NodeId)));
                }
            }
            let again = induced_subgraph(&g, s.global_ids().iter().map(|&v| v as usize)).unwrap();
            prop_assert_eq!(again, s);
        }
    }
}
