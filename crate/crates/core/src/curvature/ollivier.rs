//! Exact Ollivier-Ricci curvature of an edge under the uniform one-step
//! random walk (no laziness).
//!
//! `μ_u` puts mass `1/d_u` on every neighbor of `u`. Scaling both measures
//! by `L = lcm(d_u, d_v)` turns the Wasserstein problem into an integer
//! transportation problem with costs in `{0, 1, 2, 3}`, so the optimum and
//! the curvature `1 - W_1` are exact rationals with denominator `L`.

use super::transport::{solve_transport, TransportSolution};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Shortest-path distance between `p` and `q`, capped at 3.
///
/// Equivalent to a breadth-first search of depth 3: 0 when equal, 1 when
/// adjacent, 2 with a common neighbor, otherwise 3. For `p ∈ N(u)`,
/// `q ∈ N(v)` of an edge (u, v) the path p-u-v-q bounds the true distance
/// by 3, so the cap loses nothing there.
pub fn local_distance(graph: &Graph, p: usize, q: usize) -> u8 {
    if p == q {
        0
    } else if graph.has_edge(p, q) {
        1
    } else if graph.common_neighbor_count(p, q) > 0 {
        2
    } else {
        3
    }
}

/// Reusable scratch marks for building transport cost matrices.
#[derive(Debug, Clone)]
pub struct OrcWorkspace {
    stamp: Vec<u32>,
    epoch: u32,
}

impl OrcWorkspace {
    pub fn new(node_count: usize) -> Self {
        Self {
            stamp: vec![0; node_count],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) -> u32 {
        if self.epoch == u32::MAX {
            self.stamp.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }

    /// Capped distances `d(p, q)` for `p ∈ rows`, `q ∈ cols`, row-major.
    fn cost_matrix(&mut self, graph: &Graph, rows: &[NodeId], cols: &[NodeId]) -> Vec<u8> {
        if self.stamp.len() < graph.node_count() {
            self.stamp.resize(graph.node_count(), 0);
        }
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &p in rows {
            let mark = self.next_epoch();
            for &w in graph.neighbors(p as usize) {
                self.stamp[w as usize] = mark;
            }
            for &q in cols {
                let d = if p == q {
                    0
                } else if self.stamp[q as usize] == mark {
                    1
                } else if graph
                    .neighbors(q as usize)
                    .iter()
                    .any(|&w| self.stamp[w as usize] == mark)
                {
                    2
                } else {
                    3
                };
                out.push(d);
            }
        }
        out
    }
}

/// Exact curvature with its optimal transport plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrcSolution {
    pub u: usize,
    pub v: usize,
    /// Mass scale `L = lcm(d_u, d_v)`; every neighbor of `u` supplies
    /// `L / d_u` units and every neighbor of `v` demands `L / d_v`.
    pub scale: i64,
    /// Optimal transport cost in scaled units, `W_1 = cost / scale`.
    pub cost: i64,
    pub supply_nodes: Vec<NodeId>,
    pub demand_nodes: Vec<NodeId>,
    /// `(index into supply_nodes, index into demand_nodes, units)`.
    pub plan: Vec<(usize, usize, i64)>,
}

impl OrcSolution {
    pub fn wasserstein(&self) -> f64 {
        self.cost as f64 / self.scale as f64
    }

    /// `κ = 1 - W_1`, as the exact fraction `(scale - cost) / scale`.
    pub fn curvature_fraction(&self) -> (i64, i64) {
        (self.scale - self.cost, self.scale)
    }

    pub fn curvature(&self) -> f64 {
        (self.scale - self.cost) as f64 / self.scale as f64
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn exact_orc_solution(
    graph: &Graph,
    workspace: &mut OrcWorkspace,
    u: usize,
    v: usize,
) -> Result<OrcSolution> {
    if u >= graph.node_count() || v >= graph.node_count() || !graph.has_edge(u, v) {
        return Err(Error::EdgeNotFound(u, v));
    }
    let (du, dv) = (graph.degree(u) as i64, graph.degree(v) as i64);
    let scale = du / gcd(du, dv) * dv;
    let rows = graph.neighbors(u);
    let cols = graph.neighbors(v);
    let costs = workspace.cost_matrix(graph, rows, cols);
    let supply = vec![scale / du; rows.len()];
    let demand = vec![scale / dv; cols.len()];
    let TransportSolution { cost, flows } =
        solve_transport(&supply, &demand, |i, j| i64::from(costs[i * cols.len() + j]));
    Ok(OrcSolution {
        u,
        v,
        scale,
        cost,
        supply_nodes: rows.to_vec(),
        demand_nodes: cols.to_vec(),
        plan: flows,
    })
}

/// `κ(u, v) = 1 - W_1(μ_u, μ_v)` for the existing edge (u, v).
pub fn exact_orc(graph: &Graph, u: usize, v: usize) -> Result<f64> {
    let mut ws = OrcWorkspace::new(graph.node_count());
    exact_orc_solution(graph, &mut ws, u, v).map(|s| s.curvature())
}
