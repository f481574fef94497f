//! Degree-threshold core-periphery partition.
//!
//! The threshold `d_th` maximizes the number of edges joining a node of
//! degree `> d` to a node of degree `<= d`. Nodes above the threshold form the
//! core, the rest the periphery, and edges straddling the two are vertical.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Straddling-edge count for every candidate threshold `d` in `0..=max_degree`.
///
/// An edge with endpoint degrees `lo < hi` straddles exactly the thresholds
/// `lo..hi`, so one difference array over the degree range gives the whole
/// profile in `O(|E| + d_max)`.
pub fn vertical_edge_profile(graph: &Graph) -> Vec<usize> {
    let d_max = graph.max_degree();
    let mut diff = vec![0i64; d_max + 2];
    for (u, v) in graph.edges() {
        let (a, b) = (graph.degree(u), graph.degree(v));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo < hi {
            diff[lo] += 1;
            diff[hi] -= 1;
        }
    }
    let mut acc = 0i64;
    diff[..=d_max]
        .iter()
        .map(|&x| {
            acc += x;
            acc as usize
        })
        .collect()
}

/// Smallest `d >= 1` maximizing the straddling-edge count.
///
/// When no threshold separates any edge (regular graphs), returns the maximum
/// degree so the core is empty.
pub fn compute_degree_threshold(graph: &Graph) -> Result<usize> {
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let profile = vertical_edge_profile(graph);
    let d_max = profile.len() - 1;
    let (mut best_d, mut best) = (d_max, 0);
    for (d, &count) in profile.iter().enumerate().skip(1) {
        if count > best {
            best = count;
            best_d = d;
        }
    }
    Ok(best_d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorePeripheryPartition {
    pub d_th: usize,
    is_core: Vec<bool>,
    core_nodes: Vec<NodeId>,
    periphery_nodes: Vec<NodeId>,
    pub core_edge_count: usize,
    pub periphery_edge_count: usize,
    pub vertical_edge_count: usize,
}

impl CorePeripheryPartition {
    #[inline]
    pub fn is_core(&self, v: usize) -> bool {
        self.is_core[v]
    }

    pub fn core_nodes(&self) -> &[NodeId] {
        &self.core_nodes
    }

    pub fn periphery_nodes(&self) -> &[NodeId] {
        &self.periphery_nodes
    }

    pub fn core_count(&self) -> usize {
        self.core_nodes.len()
    }

    pub fn periphery_count(&self) -> usize {
        self.periphery_nodes.len()
    }

    pub fn node_count(&self) -> usize {
        self.is_core.len()
    }

    /// No edge crosses the threshold; samplers reduce to pure periphery traversal.
    pub fn is_degenerate(&self) -> bool {
        self.vertical_edge_count == 0
    }
}

pub fn partition_graph(graph: &Graph, d_th: usize) -> Result<CorePeripheryPartition> {
    if d_th == 0 {
        return Err(Error::InvalidParameter("degree threshold must be >= 1".into()));
    }
    let is_core: Vec<bool> = (0..graph.node_count())
        .map(|v| graph.degree(v) > d_th)
        .collect();
    let (mut core_nodes, mut periphery_nodes) = (Vec::new(), Vec::new());
    for (v, &c) in is_core.iter().enumerate() {
        if c {
            core_nodes.push(v as NodeId);
        } else {
            periphery_nodes.push(v as NodeId);
        }
    }
    let (mut core_e, mut per_e, mut ver_e) = (0, 0, 0);
    for (u, v) in graph.edges() {
        match (is_core[u], is_core[v]) {
            (true, true) => core_e += 1,
            (false, false) => per_e += 1,
            _ => ver_e += 1,
        }
    }
    Ok(CorePeripheryPartition {
        d_th,
        is_core,
        core_nodes,
        periphery_nodes,
        core_edge_count: core_e,
        periphery_edge_count: per_e,
        vertical_edge_count: ver_e,
    })
}

/// Threshold and partition in one call.
pub fn partition_auto(graph: &Graph) -> Result<CorePeripheryPartition> {
    partition_graph(graph, compute_degree_threshold(graph)?)
}

/// One row of the partition summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub d_th: usize,
    pub nodes: usize,
    pub edges: usize,
    pub core_count: usize,
    pub vertical_edge_count: usize,
    /// |V_core| / |V|
    pub core_ratio: f64,
    /// |E_ver| / |E|
    pub vertical_edge_ratio: f64,
    pub cpu_seconds: f64,
    pub degenerate: bool,
}

pub fn partition_stats(
    partition: &CorePeripheryPartition,
    graph: &Graph,
    wall_time: Duration,
) -> PartitionReport {
    let nodes = graph.node_count();
    let edges = graph.edge_count();
    PartitionReport {
        d_th: partition.d_th,
        nodes,
        edges,
        core_count: partition.core_count(),
        vertical_edge_count: partition.vertical_edge_count,
        core_ratio: partition.core_count() as f64 / nodes.max(1) as f64,
        vertical_edge_ratio: partition.vertical_edge_count as f64 / edges.max(1) as f64,
        cpu_seconds: wall_time.as_secs_f64(),
        degenerate: partition.is_degenerate(),
    }
}

impl std::fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{:.2}%\t{:.2}%\t{:.2}",
            self.nodes,
            self.edges,
            self.d_th,
            100.0 * self.core_ratio,
            100.0 * self.vertical_edge_ratio,
            self.cpu_seconds
        )
    }
}
