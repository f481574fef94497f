//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use hisgraph::{Graph, Subgraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random graph with every degree at most `cap`.
pub fn bounded_degree(n: usize, attempts: usize, cap: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut edges = std::collections::BTreeSet::new();
    for _ in 0..attempts {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        let key = (u.min(v), u.max(v));
        if u != v && deg[u] < cap && deg[v] < cap && edges.insert(key) {
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Unbounded BFS distance (`usize::MAX` if unreachable).
pub fn bfs_distance(graph: &Graph, from: usize, to: usize) -> usize {
    let mut dist = vec![usize::MAX; graph.node_count()];
    let mut queue = VecDeque::from([from]);
    dist[from] = 0;
    while let Some(x) = queue.pop_front() {
        if x == to {
            return dist[x];
        }
        for &w in graph.neighbors(x) {
            let w = w as usize;
            if dist[w] == usize::MAX {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    usize::MAX
}

/// Vertical edges at threshold `d`, by direct edge scan.
pub fn vertical_count(graph: &Graph, d: usize) -> usize {
    graph
        .edges()
        .filter(|&(u, v)| {
            let (a, b) = (graph.degree(u), graph.degree(v));
            (a > d && b <= d) || (b > d && a <= d)
        })
        .count()
}

/// Smallest maximizer of [`vertical_count`] over `1..=d_max`; `d_max` when
/// every count is zero.
pub fn brute_force_threshold(graph: &Graph) -> usize {
    let d_max = graph.max_degree();
    let mut best = (0, d_max);
    for d in 1..=d_max {
        let c = vertical_count(graph, d);
        if c > best.0 {
            best = (c, d);
        }
    }
    best.1
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    if parent[x] != x {
        let r = find(parent, parent[x]);
        parent[x] = r;
    }
    parent[x]
}

/// Ollivier-Ricci curvature by enumerating every basic (vertex) solution of
/// the transport polytope: each acyclic support set determines at most one
/// plan, found by peeling leaves. Exact rational result `(num, den)`.
pub fn brute_force_orc(graph: &Graph, u: usize, v: usize) -> (i64, i64) {
    let rows: Vec<usize> = graph.neighbors(u).iter().map(|&x| x as usize).collect();
    let cols: Vec<usize> = graph.neighbors(v).iter().map(|&x| x as usize).collect();
    let (a, b) = (rows.len(), cols.len());
    assert!(a * b <= 20, "oracle limited to small neighborhoods");
    let (du, dv) = (a as i64, b as i64);
    let scale = du / gcd(du, dv) * dv;
    let cost: Vec<i64> = rows
        .iter()
        .flat_map(|&p| cols.iter().map(move |&q| (p, q)))
        .map(|(p, q)| bfs_distance(graph, p, q) as i64)
        .collect();
    let cells = a * b;
    let mut best = i64::MAX;
    for mask in 1u32..(1 << cells) {
        if mask.count_ones() as usize > a + b - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..a + b).collect();
        let mut acyclic = true;
        for c in 0..cells {
            if mask >> c & 1 == 1 {
                let (x, y) = (find(&mut parent, c / b), find(&mut parent, a + c % b));
                if x == y {
                    acyclic = false;
                    break;
                }
                parent[x] = y;
            }
        }
        if !acyclic {
            continue;
        }
        let mut remaining: Vec<i64> = (0..a).map(|_| scale / du).chain((0..b).map(|_| scale / dv)).collect();
        let mut live: Vec<usize> = (0..cells).filter(|&c| mask >> c & 1 == 1).collect();
        let mut total = 0i64;
        let mut feasible = true;
        while !live.is_empty() {
            let degree = |node: usize, live: &[usize]| {
                live.iter()
                    .filter(|&&c| c / b == node || a + c % b == node)
                    .count()
            };
            let leaf = (0..a + b).find(|&n| degree(n, &live) == 1);
            let Some(leaf) = leaf else {
                feasible = false;
                break;
            };
            let pos = live
                .iter()
                .position(|&c| c / b == leaf || a + c % b == leaf)
                .unwrap();
            let c = live.swap_remove(pos);
            let amount = remaining[leaf];
            let other = if leaf < a { a + c % b } else { c / b };
            if amount < 0 || remaining[other] < amount {
                feasible = false;
                break;
            }
            remaining[leaf] = 0;
            remaining[other] -= amount;
            total += amount * cost[c];
        }
        if feasible && remaining.iter().all(|&r| r == 0) {
            best = best.min(total);
        }
    }
    (scale - best, scale)
}

/// Edge count of the subgraph induced by `sub`'s nodes, by scanning every
/// parent edge.
pub fn brute_force_induced_edges(graph: &Graph, sub: &Subgraph) -> Vec<(usize, usize)> {
    let inside = |x: usize| sub.global_ids().contains(&(x as u32));
    graph.edges().filter(|&(u, v)| inside(u) && inside(v)).collect()
}
