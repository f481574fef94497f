use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Subgraph};

/// A simple path `a-b-c-d` stored with `a < d`.
pub type Chain = [NodeId; 4];

/// Above this many chains, enumeration keeps a uniform random subset.
pub const DEFAULT_CHAIN_CAP: u64 = 100_000_000;

fn canonical(a: NodeId, b: NodeId, c: NodeId, d: NodeId) -> Chain {
    if a < d {
        [a, b, c, d]
    } else {
        [d, c, b, a]
    }
}

/// Calls `f(a, b, c, d)` once per undirected chain whose middle edge is
/// `(b, c)` with `b < c`, all four nodes passing `ok`.
fn for_each_chain_on<F, N, K>(
    b: usize,
    c: usize,
    neighbors: &N,
    ok: &K,
    f: &mut F,
) where
    N: Fn(usize) -> Vec<usize>,
    K: Fn(usize) -> bool,
    F: FnMut(usize, usize, usize, usize),
{
    let left: Vec<usize> = neighbors(b).into_iter().filter(|&a| a != c && ok(a)).collect();
    if left.is_empty() {
        return;
    }
    let right: Vec<usize> = neighbors(c).into_iter().filter(|&d| d != b && ok(d)).collect();
    for &a in &left {
        for &d in &right {
            if a != d {
                f(a, b, c, d);
            }
        }
    }
}

/// `|P_G(k)|` without materializing the chains.
pub fn count_chains(graph: &Graph, k: usize) -> u64 {
    let ok = |v: usize| graph.degree(v) <= k;
    graph
        .edges()
        .par_bridge()
        .filter(|&(b, c)| ok(b) && ok(c))
        .map(|(b, c)| {
            let left: Vec<NodeId> = graph
                .neighbors(b)
                .iter()
                .copied()
                .filter(|&a| a as usize != c && ok(a as usize))
                .collect();
            let right: Vec<NodeId> = graph
                .neighbors(c)
                .iter()
                .copied()
                .filter(|&d| d as usize != b && ok(d as usize))
                .collect();
            let shared = crate::graph::sorted_intersection_count(&left, &right);
            (left.len() * right.len() - shared) as u64
        })
        .sum()
}

/// Every chain of `graph` whose four nodes have degree at most `k`, sorted.
pub fn enumerate_chains(graph: &Graph, k: usize) -> Vec<Chain> {
    let ok = |v: usize| graph.degree(v) <= k;
    let nbrs = |v: usize| graph.neighbors(v).iter().map(|&w| w as usize).collect::<Vec<_>>();
    let mut out = Vec::new();
    for (b, c) in graph.edges() {
        if ok(b) && ok(c) {
            for_each_chain_on(b, c, &nbrs, &ok, &mut |a, b, c, d| {
                out.push(canonical(a as NodeId, b as NodeId, c as NodeId, d as NodeId))
            });
        }
    }
    out.sort_unstable();
    out
}

/// The chain population used for preservation checks: all of `P_G(k)` or,
/// above the cap, a Bernoulli sample of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSet {
    pub k: usize,
    /// `|P_G(k)|`.
    pub total: u64,
    /// Sorted chains under evaluation.
    pub chains: Vec<Chain>,
    pub sampled: bool,
}

impl ChainSet {
    pub fn build(graph: &Graph, k: usize, cap: u64, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("chain degree cap k must be at least 1".into()));
        }
        let total = count_chains(graph, k);
        if total <= cap {
            return Ok(Self {
                k,
                total,
                chains: enumerate_chains(graph, k),
                sampled: false,
            });
        }
        let keep = cap as f64 / total as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ok = |v: usize| graph.degree(v) <= k;
        let nbrs = |v: usize| graph.neighbors(v).iter().map(|&w| w as usize).collect::<Vec<_>>();
        let mut chains = Vec::new();
        for (b, c) in graph.edges() {
            if ok(b) && ok(c) {
                for_each_chain_on(b, c, &nbrs, &ok, &mut |a, b, c, d| {
                    if rng.random::<f64>() < keep {
                        chains.push(canonical(a as NodeId, b as NodeId, c as NodeId, d as NodeId));
                    }
                });
            }
        }
        chains.sort_unstable();
        Ok(Self {
            k,
            total,
            chains,
            sampled: true,
        })
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Indices into `chains` of the chains lying entirely inside `sub`.
    fn contained_in(&self, graph: &Graph, sub: &Subgraph) -> Vec<usize> {
        let k = self.k;
        let ok = |local: usize| graph.degree(sub.global_of(local)) <= k;
        let nbrs = |local: usize| {
            sub.local_neighbors(local)
                .iter()
                .map(|&w| w as usize)
                .collect::<Vec<_>>()
        };
        let mut found = Vec::new();
        for (b, c) in sub.local_edges() {
            if ok(b) && ok(c) {
                for_each_chain_on(b, c, &nbrs, &ok, &mut |a, b, c, d| {
                    let g = |x: usize| sub.global_of(x) as NodeId;
                    if let Ok(i) = self.chains.binary_search(&canonical(g(a), g(b), g(c), g(d))) {
                        found.push(i);
                    }
                });
            }
        }
        found
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub k: usize,
    /// Number of subgraphs.
    pub n: usize,
    /// `|P_G(k)|`.
    pub total_chains: u64,
    /// Chains checked; smaller than `total_chains` when subsampled.
    pub evaluated_chains: usize,
    pub sampled: bool,
    /// Evaluated chains found intact in at least one subgraph.
    pub preserved: usize,
    pub rate: f64,
    /// `rate` after the first `i + 1` subgraphs.
    pub curve: Vec<f64>,
}

/// `r_k^n`: the share of chains lying entirely inside at least one subgraph.
pub fn chain_preservation_rate(graph: &Graph, chains: &ChainSet, subgraphs: &[Subgraph]) -> Result<ChainReport> {
    if chains.is_empty() {
        return Err(Error::NoChains { k: chains.k });
    }
    let hits: Vec<Vec<usize>> = subgraphs
        .par_iter()
        .map(|s| chains.contained_in(graph, s))
        .collect();
    let mut seen = vec![false; chains.len()];
    let mut preserved = 0usize;
    let denom = chains.len() as f64;
    let mut curve = Vec::with_capacity(subgraphs.len());
    for found in hits {
        for i in found {
            if !seen[i] {
                seen[i] = true;
                preserved += 1;
            }
        }
        curve.push(preserved as f64 / denom);
    }
    Ok(ChainReport {
        k: chains.k,
        n: subgraphs.len(),
        total_chains: chains.total,
        evaluated_chains: chains.len(),
        sampled: chains.sampled,
        preserved,
        rate: preserved as f64 / denom,
        curve,
    })
}
