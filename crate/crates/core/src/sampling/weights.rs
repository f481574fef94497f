//! Importance weights for neighbor selection and the discrete draws built on them.

use rand::Rng;
use rand_distr::{Distribution as _, Geometric};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::CorePeripheryPartition;

/// Normalized discrete distribution over a node support.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Distribution {
    pub support: Vec<NodeId>,
    pub probs: Vec<f64>,
}

impl Distribution {
    /// Normalizes raw weights; all-zero weights fall back to uniform.
    fn from_raw(support: Vec<NodeId>, mut weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        if total > 0.0 && total.is_finite() {
            weights.iter_mut().for_each(|w| *w /= total);
        } else if !weights.is_empty() {
            let u = 1.0 / weights.len() as f64;
            weights.iter_mut().for_each(|w| *w = u);
        }
        Self {
            support,
            probs: weights,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn prob_of(&self, v: usize) -> Option<f64> {
        self.support
            .iter()
            .position(|&u| u as usize == v)
            .map(|i| self.probs[i])
    }

    /// Single draw. `None` on an empty support.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<NodeId> {
        if self.is_empty() {
            return None;
        }
        let x: f64 = rng.random();
        let mut acc = 0.0;
        for (&v, &p) in self.support.iter().zip(&self.probs) {
            acc += p;
            if x < acc {
                return Some(v);
            }
        }
        self.support.last().copied()
    }

    /// `k` distinct draws by successive renormalized draws; takes the whole
    /// support when `k >= len`.
    pub fn sample_without_replacement<R: Rng + ?Sized>(&self, rng: &mut R, k: usize) -> Vec<NodeId> {
        if k >= self.len() {
            return self.support.clone();
        }
        let mut support = self.support.clone();
        let mut weights = self.probs.clone();
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            let total: f64 = weights.iter().sum();
            let idx = if total > 0.0 {
                let x = rng.random::<f64>() * total;
                let mut acc = 0.0;
                let mut pick = weights.len() - 1;
                for (i, &w) in weights.iter().enumerate() {
                    acc += w;
                    if x < acc {
                        pick = i;
                        break;
                    }
                }
                pick
            } else {
                rng.random_range(0..weights.len())
            };
            out.push(support.swap_remove(idx));
            weights.swap_remove(idx);
        }
        out
    }
}

fn require_periphery(partition: &CorePeripheryPartition, v: usize) -> Result<()> {
    if partition.is_core(v) {
        return Err(Error::Contract(format!(
            "node {v} is a core node; neighbor weights are defined for periphery nodes"
        )));
    }
    Ok(())
}

/// Traversal distribution over periphery neighbors of periphery node `v`:
/// `p(u | v) ∝ ‖X(u)‖ / sqrt(d_u + 1)`, skipping nodes for which `exclude`
/// holds.
pub fn periphery_weights(
    graph: &Graph,
    partition: &CorePeripheryPartition,
    v: usize,
    exclude: impl Fn(usize) -> bool,
) -> Result<Distribution> {
    require_periphery(partition, v)?;
    let (support, weights): (Vec<NodeId>, Vec<f64>) = graph
        .neighbors(v)
        .iter()
        .map(|&u| u as usize)
        .filter(|&u| !partition.is_core(u) && !exclude(u))
        .map(|u| {
            let w = graph.feature_norm(u) / ((graph.degree(u) + 1) as f64).sqrt();
            (u as NodeId, w)
        })
        .unzip();
    Ok(Distribution::from_raw(support, weights))
}

/// Core-augmentation distribution over core neighbors of periphery node `v`:
/// `q(u' | v) ∝ ‖X(u')‖ · sqrt(d_u' + 1)`, biased toward hubs.
pub fn core_weights(
    graph: &Graph,
    partition: &CorePeripheryPartition,
    v: usize,
) -> Result<Distribution> {
    require_periphery(partition, v)?;
    let (support, weights): (Vec<NodeId>, Vec<f64>) = graph
        .neighbors(v)
        .iter()
        .map(|&u| u as usize)
        .filter(|&u| partition.is_core(u))
        .map(|u| {
            let w = graph.feature_norm(u) * ((graph.degree(u) + 1) as f64).sqrt();
            (u as NodeId, w)
        })
        .unzip();
    Ok(Distribution::from_raw(support, weights))
}

/// `⟨γ · k⟩` with halves rounded up, clamped to `k`.
pub fn core_draw_count(gamma: f64, core_neighbors: usize) -> usize {
    let t = (gamma * core_neighbors as f64 + 0.5).floor() as usize;
    t.min(core_neighbors)
}

/// Burn count on `{1, 2, ...}` with mean `1 / (1 - p)`.
#[derive(Debug, Clone, Copy)]
pub struct BurnCount(Geometric);

impl BurnCount {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric burn probability must lie in (0, 1), got {p}"
            )));
        }
        Geometric::new(1.0 - p)
            .map(BurnCount)
            .map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        1 + self.0.sample(rng) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Features;
    use crate::partition::partition_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Periphery node 0 (degree 3) with neighbors: 1 (degree 3), 2 (degree 8),
    /// and core hubs 3 (degree 3 + pad), 4 (degree 8 + pad) once the threshold
    /// is 8. Built by hand so degrees are exact.
    fn weighted_fixture() -> (Graph, CorePeripheryPartition) {
        // node 0: neighbors 1, 2, 9
        // node 1: degree 3 (0, 5, 6)
        // node 2: degree 8 (0, 10..17)
        let mut edges = vec![(0, 1), (0, 2), (0, 9), (1, 5), (1, 6)];
        edges.extend((10..17).map(|x| (2, x)));
        let g = Graph::from_edges(18, edges).unwrap();
        let p = partition_graph(&g, 8).unwrap();
        (g, p)
    }

    #[test]
    fn periphery_example() {
        let (g, p) = weighted_fixture();
        assert_eq!(g.degree(1), 3);
        assert_eq!(g.degree(2), 8);
        let d = periphery_weights(&g, &p, 0, |u| u == 9).unwrap();
        // raw 1/2 and 1/3
        assert!((d.prob_of(1).unwrap() - 0.6).abs() < 1e-12);
        assert!((d.prob_of(2).unwrap() - 0.4).abs() < 1e-12);

        let single = periphery_weights(&g, &p, 0, |u| u != 2).unwrap();
        assert_eq!(single.probs, vec![1.0]);
        let none = periphery_weights(&g, &p, 0, |_| true).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn core_examples() {
        // periphery node 0 joined to hubs 1 (degree 3) and 2 (degree 8)
        let mut edges = vec![(0, 1), (0, 2), (1, 3), (1, 4)];
        edges.extend((5..12).map(|x| (2, x)));
        let mut g = Graph::from_edges(12, edges).unwrap();
        let p = partition_graph(&g, 2).unwrap();
        assert!(p.is_core(1) && p.is_core(2) && !p.is_core(0));
        let d = core_weights(&g, &p, 0).unwrap();
        // raw 2 and 3
        assert!((d.prob_of(1).unwrap() - 0.4).abs() < 1e-12);
        assert!((d.prob_of(2).unwrap() - 0.6).abs() < 1e-12);

        let single = core_weights(&g, &p, 3).unwrap();
        assert_eq!(single.support, vec![1]);
        assert_eq!(single.probs, vec![1.0]);

        // equal degrees, norms 2 and 1
        let mut edges = vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)];
        edges.push((3, 4));
        g = Graph::from_edges(7, edges).unwrap();
        let mut data = vec![1.0f32; 7];
        data[1] = 2.0;
        g.set_features(Features::new(7, 1, data).unwrap()).unwrap();
        let p = partition_graph(&g, 2).unwrap();
        let d = core_weights(&g, &p, 0).unwrap();
        assert!((d.prob_of(1).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((d.prob_of(2).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn core_node_is_contract_error() {
        let (g, p) = weighted_fixture();
        let hub = (0..g.node_count()).find(|&v| p.is_core(v));
        if let Some(h) = hub {
            assert!(matches!(core_weights(&g, &p, h), Err(Error::Contract(_))));
        }
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = partition_graph(&star, 1).unwrap();
        assert!(matches!(core_weights(&star, &p, 0), Err(Error::Contract(_))));
        assert!(matches!(
            periphery_weights(&star, &p, 0, |_| false),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn zero_norms_fall_back_to_uniform() {
        let d = Distribution::from_raw(vec![4, 5], vec![0.0, 0.0]);
        assert_eq!(d.probs, vec![0.5, 0.5]);
    }

    #[test]
    fn without_replacement_is_distinct_and_weighted() {
        let d = Distribution::from_raw(vec![0, 1, 2, 3], vec![8.0, 1.0, 1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut first_is_zero = 0;
        for _ in 0..2000 {
            let s = d.sample_without_replacement(&mut rng, 2);
            assert_eq!(s.len(), 2);
            assert_ne!(s[0], s[1]);
            assert!(!s.contains(&3));
            first_is_zero += usize::from(s[0] == 0);
        }
        let frac = first_is_zero as f64 / 2000.0;
        assert!((frac - 0.8).abs() < 0.03, "{frac}");
        assert_eq!(d.sample_without_replacement(&mut rng, 9).len(), 4);
    }

    #[test]
    fn rounding_half_up() {
        assert_eq!(core_draw_count(1.0, 2), 2);
        assert_eq!(core_draw_count(0.5, 3), 2);
        assert_eq!(core_draw_count(0.4, 1), 0);
        assert_eq!(core_draw_count(0.5, 1), 1);
        assert_eq!(core_draw_count(0.4, 5), 2);
        assert_eq!(core_draw_count(1.0, 0), 0);
    }

    #[test]
    fn burn_count_mean() {
        let burn = BurnCount::new(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws: Vec<usize> = (0..100_000).map(|_| burn.sample(&mut rng)).collect();
        assert!(draws.iter().all(|&s| s >= 1));
        let mean = draws.iter().sum::<usize>() as f64 / draws.len() as f64;
        assert!((mean - 2.0).abs() <= 0.1, "{mean}");
        assert!(BurnCount::new(1.0).is_err());
        assert!(BurnCount::new(0.0).is_err());
    }
}
