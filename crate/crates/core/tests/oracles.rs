//! Library results against brute-force oracles on random small graphs.

mod common;

use hisgraph::curvature::{exact_orc_solution, localized_curvature_bound, OrcWorkspace};
use hisgraph::io;
use hisgraph::metrics::{count_chains, enumerate_chains};
use hisgraph::partition::partition_graph;
use hisgraph::sampling::{
    accumulate_frequencies, compute_norm_coefficients, Method, SampleSize, Sampler, SamplerConfig,
};
use hisgraph::{compute_degree_threshold, Graph};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (5usize..40, 0.05f64..0.4, any::<u64>()).prop_map(|(n, p, seed)| common::gnp(n, p, seed))
}

fn small_degree_graph() -> impl Strategy<Value = Graph> {
    (6usize..16, any::<u64>()).prop_map(|(n, seed)| common::bounded_degree(n, 3 * n, 4, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn threshold_matches_exhaustive_search(g in graph_strategy()) {
        prop_assume!(g.edge_count() > 0);
        prop_assert_eq!(compute_degree_threshold(&g).unwrap(), common::brute_force_threshold(&g));
    }

    #[test]
    fn vertical_edges_counted_directly(g in graph_strategy(), d in 1usize..8) {
        prop_assume!(g.edge_count() > 0);
        let p = partition_graph(&g, d).unwrap();
        prop_assert_eq!(p.vertical_edge_count, common::vertical_count(&g, d));
        prop_assert_eq!(
            p.core_edge_count + p.periphery_edge_count + p.vertical_edge_count,
            g.edge_count()
        );
    }

    #[test]
    fn exact_curvature_matches_plan_enumeration(g in small_degree_graph()) {
        let mut ws = OrcWorkspace::new(g.node_count());
        for (u, v) in g.edges() {
            let (num, den) = exact_orc_solution(&g, &mut ws, u, v).unwrap().curvature_fraction();
            let (bn, bd) = common::brute_force_orc(&g, u, v);
            prop_assert_eq!(num * bd, bn * den, "edge ({}, {})", u, v);
        }
    }

    #[test]
    fn localized_bound_never_exceeds_exact(g in graph_strategy()) {
        let mut ws = OrcWorkspace::new(g.node_count());
        for (u, v) in g.edges() {
            let exact = exact_orc_solution(&g, &mut ws, u, v).unwrap().curvature();
            let bound = localized_curvature_bound(&g, u, v).unwrap();
            prop_assert!(bound <= exact + 1e-9, "({u}, {v}): {bound} > {exact}");
            prop_assert!((-2.0..=1.0).contains(&exact));
        }
    }

    #[test]
    fn chain_count_matches_enumeration(g in graph_strategy(), k in 1usize..8) {
        prop_assert_eq!(count_chains(&g, k), enumerate_chains(&g, k).len() as u64);
    }

    #[test]
    fn samples_are_node_induced(g in graph_strategy(), seed in any::<u64>(), m in 0usize..5) {
        prop_assume!(g.edge_count() > 0);
        let part = hisgraph::partition::partition_auto(&g).unwrap();
        let method = Method::ALL[m];
        let cfg = SamplerConfig::new(method, SampleSize::Rate(0.3), seed);
        let Ok(sampler) = Sampler::new(&g, &part, &cfg) else {
            // an empty periphery is rejected up front for the HIS methods
            prop_assert!(part.periphery_count() == 0);
            return Ok(());
        };
        let outcomes = sampler.sample_many(6).unwrap();
        for o in &outcomes {
            let mut edges: Vec<_> = o.subgraph.global_edges().collect();
            edges.sort_unstable();
            prop_assert_eq!(edges, common::brute_force_induced_edges(&g, &o.subgraph));
        }
        let counters = accumulate_frequencies(&g, outcomes.iter().map(|o| &o.subgraph)).unwrap();
        let coeffs = compute_norm_coefficients(&g, &counters).unwrap();
        for (v, lambda) in coeffs.lambda.iter().enumerate() {
            let seen = outcomes.iter().filter(|o| o.subgraph.contains(v)).count();
            prop_assert_eq!(*lambda, (seen > 0).then(|| seen as f64 / 6.0));
        }
        for &(u, v, a) in &coeffs.alpha {
            prop_assert!(a > 0.0 && a <= 1.0, "alpha({}, {}) = {}", u, v, a);
        }
    }
}

#[test]
fn subgraph_files_round_trip() {
    let g = hisgraph::graph::generate_ba(300, 3, 8).unwrap();
    let part = hisgraph::partition::partition_auto(&g).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for method in Method::ALL {
        let cfg = SamplerConfig::new(method, SampleSize::Rate(0.1), 4);
        let outcomes = Sampler::new(&g, &part, &cfg).unwrap().sample_many(5).unwrap();
        for (i, o) in outcomes.iter().enumerate() {
            io::write_subgraph(dir.path(), i, &o.subgraph).unwrap();
        }
        let back = io::read_subgraphs(dir.path(), &g).unwrap();
        assert_eq!(back, outcomes.into_iter().map(|o| o.subgraph).collect::<Vec<_>>());
    }
}
