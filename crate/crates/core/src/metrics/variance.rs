use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forward::{forward_pass, restrict_features, ForwardConfig, ForwardWeights};
use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    /// Population variance of `‖Y_i(v)‖` over the subgraphs holding `v`;
    /// zero for nodes seen at most once.
    pub per_node_var: Vec<f64>,
    /// `Σ_v Var(v) / |V|` over every node of the parent graph.
    pub var_avg: f64,
    pub appearance_counts: Vec<u32>,
    pub n_subgraphs: usize,
    /// `var_avg` after the first `i + 1` subgraphs.
    pub curve: Vec<f64>,
}

impl VarianceReport {
    pub fn unseen_nodes(&self) -> usize {
        self.appearance_counts.iter().filter(|&&c| c == 0).count()
    }
}

/// Aggregation variance with Glorot weights drawn from `config`.
pub fn aggregation_variance(graph: &Graph, subgraphs: &[Subgraph], config: &ForwardConfig) -> Result<VarianceReport> {
    let input_dim = graph.features().map_or(1, |f| f.cols());
    let weights = ForwardWeights::glorot(input_dim, config)?;
    aggregation_variance_with(graph, subgraphs, &weights)
}

pub fn aggregation_variance_with(
    graph: &Graph,
    subgraphs: &[Subgraph],
    weights: &ForwardWeights,
) -> Result<VarianceReport> {
    if subgraphs.is_empty() {
        return Err(Error::InvalidParameter("variance needs at least one subgraph".into()));
    }
    let outputs: Vec<Vec<f64>> = subgraphs
        .par_iter()
        .map(|s| forward_pass(s, &restrict_features(graph, s), weights))
        .collect::<Result<_>>()?;

    let n = graph.node_count();
    let mut count = vec![0u32; n];
    let mut mean = vec![0.0f64; n];
    let mut m2 = vec![0.0f64; n];
    let mut var = vec![0.0f64; n];
    let mut total = 0.0f64;
    let mut curve = Vec::with_capacity(subgraphs.len());
    for (sub, ys) in subgraphs.iter().zip(&outputs) {
        for (&g, &y) in sub.global_ids().iter().zip(ys) {
            let v = g as usize;
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, node_count: n });
            }
            count[v] += 1;
            let k = f64::from(count[v]);
            let delta = y - mean[v];
            mean[v] += delta / k;
            m2[v] += delta * (y - mean[v]);
            let updated = m2[v] / k;
            total += updated - var[v];
            var[v] = updated;
        }
        curve.push(total / n as f64);
    }
    // recompute the final average directly to shed accumulated drift
    let var_avg = var.iter().sum::<f64>() / n as f64;
    if let Some(last) = curve.last_mut() {
        *last = var_avg;
    }
    Ok(VarianceReport {
        per_node_var: var,
        var_avg,
        appearance_counts: count,
        n_subgraphs: subgraphs.len(),
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{induced_subgraph, Features};
    use crate::metrics::Matrix;

    #[test]
    fn identical_subgraphs_have_zero_variance() {
        let g = cycle(6);
        let s = induced_subgraph(&g, [0, 1, 2]).unwrap();
        let r = aggregation_variance(&g, &[s.clone(), s.clone(), s], &ForwardConfig::default()).unwrap();
        assert!(r.per_node_var.iter().all(|&v| v == 0.0));
        assert_eq!(r.appearance_counts, vec![3, 3, 3, 0, 0, 0]);
        assert_eq!(r.unseen_nodes(), 3);
    }

    #[test]
    fn values_one_and_three() {
        // one layer, identity weight: node 0 alone gives 1,
        // with neighbor 1 it gives (1 + 5) / 2 = 3
        let mut g = path(2);
        g.set_features(Features::new(2, 1, vec![1.0, 5.0]).unwrap()).unwrap();
        let w = ForwardWeights::explicit(vec![Matrix::identity(1)]).unwrap();
        let a = induced_subgraph(&g, [0]).unwrap();
        let b = induced_subgraph(&g, [0, 1]).unwrap();
        let r = aggregation_variance_with(&g, &[a, b], &w).unwrap();
        assert!((r.per_node_var[0] - 1.0).abs() < 1e-12);
        assert_eq!(r.per_node_var[1], 0.0);
        assert_eq!(r.appearance_counts, vec![2, 1]);
        assert!((r.var_avg - 0.5).abs() < 1e-12);
        assert_eq!(r.curve[0], 0.0);
    }

    #[test]
    fn welford_matches_direct() {
        let g = crate::graph::generate_ba(120, 2, 5).unwrap();
        let subs: Vec<_> = (0..12)
            .map(|i| induced_subgraph(&g, (0..120).filter(|v| (v * 7 + i) % 3 != 0)).unwrap())
            .collect();
        let cfg = ForwardConfig::default();
        let r = aggregation_variance(&g, &subs, &cfg).unwrap();
        let w = ForwardWeights::glorot(1, &cfg).unwrap();
        let mut samples = vec![Vec::new(); 120];
        for s in &subs {
            let y = forward_pass(s, &restrict_features(&g, s), &w).unwrap();
            for (&v, y) in s.global_ids().iter().zip(y) {
                samples[v as usize].push(y);
            }
        }
        for (v, ys) in samples.iter().enumerate() {
            if ys.is_empty() {
                assert_eq!(r.per_node_var[v], 0.0);
                continue;
            }
            let k = ys.len() as f64;
            let m = ys.iter().sum::<f64>() / k;
            let direct = ys.iter().map(|y| (y - m).powi(2)).sum::<f64>() / k;
            assert!((direct - r.per_node_var[v]).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_batch() {
        assert!(aggregation_variance(&triangle(), &[], &ForwardConfig::default()).is_err());
    }
}
