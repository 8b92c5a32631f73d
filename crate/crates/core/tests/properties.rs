mod common;

use proptest::prelude::*;
use qlnet::dynamics::{boltzmann, qld_vector_field};
use qlnet::equilibria::{exploitability, nash_gaps, surprisal_gap};
use qlnet::spectral::{influence_bound, stability_report, verify_block_norm_bound};
use qlnet::{ExplorationRates, JointStrategy, NetworkGame};

fn small_game() -> impl Strategy<Value = NetworkGame> {
    (2usize..6)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(2usize..4, n),
                prop::collection::vec(any::<bool>(), 1..16),
                prop::collection::vec(0.0f64..1.0, 64),
            )
        })
        .prop_map(|(counts, mask, draws)| {
            let edges = common::graph_edges(counts.len(), &mask);
            common::game_from_draws(&counts, &edges, &draws, 3.0)
        })
}

fn interior(counts: &[usize], draws: &[f64]) -> JointStrategy {
    let mut it = draws.iter().cycle();
    JointStrategy::new(
        counts
            .iter()
            .map(|&n| {
                let w: Vec<f64> = it.by_ref().take(n).map(|d| 0.05 + d).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|v| v / s).collect()
            })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn payoff_is_strategy_dot_reward(g in small_game(), d in prop::collection::vec(0.0f64..1.0, 24)) {
        let x = interior(g.action_counts(), &d);
        for k in 0..g.num_agents() {
            let r = g.reward_vector(k, &x).unwrap();
            let u: f64 = x.agent(k).iter().zip(&r).map(|(p, v)| p * v).sum();
            prop_assert!((g.payoff(k, &x).unwrap() - u).abs() < 1e-12);
        }
    }

    #[test]
    fn qld_field_is_tangent(g in small_game(), d in prop::collection::vec(0.0f64..1.0, 24), t in 0.01f64..5.0) {
        let x = interior(g.action_counts(), &d);
        let rates = ExplorationRates::uniform(g.num_agents(), t).unwrap();
        for fk in qld_vector_field(&g, &x, &rates).unwrap() {
            prop_assert!(fk.iter().sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn boltzmann_is_a_monotone_distribution(q in prop::collection::vec(-50.0f64..50.0, 2..8), t in 0.01f64..10.0) {
        let p = boltzmann(&q, t).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..q.len() {
            for j in 0..q.len() {
                if q[i] > q[j] {
                    prop_assert!(p[i] >= p[j]);
                }
            }
        }
    }

    #[test]
    fn surprisal_gap_is_nonnegative(w in prop::collection::vec(1e-6f64..1.0, 2..10)) {
        let s: f64 = w.iter().sum();
        let x: Vec<f64> = w.iter().map(|v| v / s).collect();
        let a = surprisal_gap(&x).unwrap();
        prop_assert!(a >= -1e-12);
        prop_assert!(a < (x.len() as f64).ln());
    }

    #[test]
    fn exploitability_bounds_every_gap(g in small_game(), d in prop::collection::vec(0.0f64..1.0, 24)) {
        let x = interior(g.action_counts(), &d);
        let gaps = nash_gaps(&g, &x).unwrap();
        prop_assert!(gaps.iter().all(|v| *v >= -1e-12));
        prop_assert!((exploitability(&g, &x).unwrap() - gaps.iter().sum::<f64>()).abs() < 1e-9);
    }

    #[test]
    fn influence_bound_matches_enumeration(g in small_game()) {
        for k in 0..g.num_agents() {
            let oracle = common::brute_force_influence(&g, k);
            prop_assert!((influence_bound(&g, k) - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn adjacency_norms_are_ordered(g in small_game()) {
        let r = stability_report(&g).unwrap();
        // ‖G‖₂ ≤ ‖G‖∞ for a symmetric G, and ≥ the average degree
        let n = g.num_agents() as f64;
        let avg = 2.0 * g.edges().len() as f64 / n;
        prop_assert!(r.norm_two <= r.norm_inf + 1e-9);
        prop_assert!(r.norm_two >= avg - 1e-9);
        prop_assert!(r.c3 <= r.c2 + 1e-9);
    }

    #[test]
    fn sigma_i_vanishes_only_for_zero_sum(g in small_game()) {
        let r = stability_report(&g).unwrap();
        prop_assert!(r.sigma_i > 0.0);
        let zs = qlnet::NetworkGame::new(
            g.action_counts().to_vec(),
            g.edges()
                .iter()
                .map(|e| qlnet::Edge::new(e.k, e.l, e.a_kl.clone(), e.a_kl.transpose().scaled(-1.0)))
                .collect(),
        )
        .unwrap();
        prop_assert!(stability_report(&zs).unwrap().sigma_i < 1e-9);
    }

    #[test]
    fn block_norm_bound_holds(g in small_game()) {
        prop_assert!(verify_block_norm_bound(&g).unwrap().holds);
    }

    #[test]
    fn two_norm_is_monotone_in_scale(g in small_game(), c in 1.0f64..4.0) {
        let m = qlnet::spectral::interaction_block_matrix(&g);
        let a = qlnet::op_norm_two(&m).unwrap();
        let b = qlnet::op_norm_two(&m.scaled(c)).unwrap();
        prop_assert!((b - c * a).abs() < 1e-8 * b.max(1.0));
    }

    #[test]
    fn two_norm_is_subadditive(a in small_game(), d in prop::collection::vec(0.0f64..1.0, 64)) {
        // same shape, independent entries: ‖A + B‖₂ ≤ ‖A‖₂ + ‖B‖₂
        let edges: Vec<(usize, usize)> = a.edges().iter().map(|e| (e.k, e.l)).collect();
        let b = common::game_from_draws(a.action_counts(), &edges, &d, 3.0);
        let ma = qlnet::spectral::interaction_block_matrix(&a);
        let mb = qlnet::spectral::interaction_block_matrix(&b);
        let sum = qlnet::op_norm_two(&ma.add(&mb).unwrap()).unwrap();
        let bound = qlnet::op_norm_two(&ma).unwrap() + qlnet::op_norm_two(&mb).unwrap();
        prop_assert!(sum <= bound + 1e-9);
    }
}
