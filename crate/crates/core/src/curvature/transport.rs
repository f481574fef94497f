//! Integer min-cost flow by successive shortest augmenting paths with
//! Johnson potentials, and the transportation problem on top of it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
    cost: i64,
}

/// Min-cost flow network with non-negative arc costs.
#[derive(Debug, Clone)]
pub struct MinCostFlow {
    graph: Vec<Vec<Arc>>,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        Self {
            graph: vec![Vec::new(); nodes],
        }
    }

    /// Adds arc `from -> to`; returns its handle for [`MinCostFlow::flow_on`].
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> (usize, usize) {
        debug_assert!(cost >= 0, "negative arc costs need initial potentials");
        let fwd = self.graph[from].len();
        let bwd = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Arc {
            to,
            rev: bwd,
            cap,
            cost,
        });
        self.graph[to].push(Arc {
            to: from,
            rev: fwd,
            cap: 0,
            cost: -cost,
        });
        (from, fwd)
    }

    /// Flow currently carried by the arc behind `handle`.
    pub fn flow_on(&self, handle: (usize, usize)) -> i64 {
        let arc = &self.graph[handle.0][handle.1];
        self.graph[arc.to][arc.rev].cap
    }

    /// Sends up to `limit` units from `source` to `sink` at minimum cost.
    /// Returns `(flow, cost)`.
    pub fn run(&mut self, source: usize, sink: usize, limit: i64) -> (i64, i64) {
        let n = self.graph.len();
        let mut potential = vec![0i64; n];
        let mut dist = vec![INF; n];
        let mut prev: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
        let (mut flow, mut cost) = (0i64, 0i64);
        let mut heap = BinaryHeap::new();

        while flow < limit {
            dist.fill(INF);
            dist[source] = 0;
            heap.push(Reverse((0i64, source)));
            while let Some(Reverse((d, x))) = heap.pop() {
                if d > dist[x] {
                    continue;
                }
                for (i, arc) in self.graph[x].iter().enumerate() {
                    if arc.cap <= 0 {
                        continue;
                    }
                    let nd = d + arc.cost + potential[x] - potential[arc.to];
                    if nd < dist[arc.to] {
                        dist[arc.to] = nd;
                        prev[arc.to] = (x, i);
                        heap.push(Reverse((nd, arc.to)));
                    }
                }
            }
            if dist[sink] == INF {
                break;
            }
            for (p, d) in potential.iter_mut().zip(&dist) {
                if *d < INF {
                    *p += d;
                }
            }
            let mut push = limit - flow;
            let mut x = sink;
            while x != source {
                let (px, i) = prev[x];
                push = push.min(self.graph[px][i].cap);
                x = px;
            }
            let mut x = sink;
            while x != source {
                let (px, i) = prev[x];
                let rev = self.graph[px][i].rev;
                self.graph[px][i].cap -= push;
                self.graph[x][rev].cap += push;
                cost += push * self.graph[px][i].cost;
                x = px;
            }
            flow += push;
        }
        (flow, cost)
    }
}

/// Optimal integer transport plan between integer supplies and demands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportSolution {
    pub cost: i64,
    /// `(supply index, demand index, amount)` for every positive flow.
    pub flows: Vec<(usize, usize, i64)>,
}

/// Minimum-cost transport from `supply` to `demand` (equal totals) under
/// the non-negative integer `cost(i, j)`.
pub fn solve_transport(
    supply: &[i64],
    demand: &[i64],
    cost: impl Fn(usize, usize) -> i64,
) -> TransportSolution {
    let total: i64 = supply.iter().sum();
    debug_assert_eq!(total, demand.iter().sum::<i64>());
    let (a, b) = (supply.len(), demand.len());
    let source = a + b;
    let sink = source + 1;
    let mut net = MinCostFlow::new(a + b + 2);
    for (i, &s) in supply.iter().enumerate() {
        net.add_arc(source, i, s, 0);
    }
    for (j, &d) in demand.iter().enumerate() {
        net.add_arc(a + j, sink, d, 0);
    }
    let mut handles = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            handles.push((i, j, net.add_arc(i, a + j, total, cost(i, j))));
        }
    }
    let (flow, cost) = net.run(source, sink, total);
    debug_assert_eq!(flow, total);
    let flows = handles
        .into_iter()
        .filter_map(|(i, j, h)| {
            let f = net.flow_on(h);
            (f > 0).then_some((i, j, f))
        })
        .collect();
    TransportSolution { cost, flows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_instance() {
        let supply = [3, 2];
        let demand = [1, 2, 2];
        let c = [[4, 1, 3], [2, 5, 1]];
        let sol = solve_transport(&supply, &demand, |i, j| c[i][j]);
        // optimum: s0 -> d0:1 (4), d1:2 (2) ; s1 -> d2:2 (2) = 8
        // alternative s0 -> d1:2, d2:1 (2+3=5), s1 -> d0:1, d2:1 (2+1=3) = 8
        assert_eq!(sol.cost, 8);
        let mut rows = [0i64; 2];
        let mut cols = [0i64; 3];
        for &(i, j, f) in &sol.flows {
            rows[i] += f;
            cols[j] += f;
        }
        assert_eq!(rows, supply);
        assert_eq!(cols, demand);
    }

    #[test]
    fn zero_cost_diagonal() {
        let sol = solve_transport(&[1, 1, 1], &[1, 1, 1], |i, j| if i == j { 0 } else { 3 });
        assert_eq!(sol.cost, 0);
        assert_eq!(sol.flows, vec![(0, 0, 1), (1, 1, 1), (2, 2, 1)]);
    }

    #[test]
    fn partial_flow_respects_limit() {
        let mut net = MinCostFlow::new(3);
        net.add_arc(0, 1, 5, 1);
        net.add_arc(1, 2, 3, 1);
        assert_eq!(net.run(0, 2, 10), (3, 6));
    }
}
