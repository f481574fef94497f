use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Barabási–Albert preferential attachment graph.
///
/// Starts from a clique on `m + 1` nodes; every further node attaches to `m`
/// distinct existing nodes drawn proportionally to degree. Degree-proportional
/// draws pick a uniform entry of the edge-endpoint list.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || n <= m {
        return Err(Error::InvalidParameter(format!(
            "BA model needs n > m >= 1 (got n = {n}, m = {m})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clique = m + 1;
    let mut edges = Vec::with_capacity(clique * m / 2 + (n - clique) * m);
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..clique {
        for v in u + 1..clique {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in clique..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    Graph::from_edges(n, edges)
}
