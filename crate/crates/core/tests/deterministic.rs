mod common;

use common::*;
use proptest::prelude::*;
use signet_core::deterministic::*;
use signet_core::fixtures;
use signet_core::graph::Sign;
use signet_core::laplacian::*;
use signet_core::matrix::{norm_inf, spread};
use signet_core::rng::{seeded, unit_f64, uniform};
use signet_core::spectral::critical_beta_deterministic;
use signet_core::SignedGraph;

fn degree_caps(g: &SignedGraph) -> (f64, f64) {
    let b = build_matrices(g);
    let n = g.n();
    (
        (0..n).map(|i| b.d_plus[(i, i)]).fold(0.0, f64::max),
        (0..n).map(|i| b.d_minus[(i, i)]).fold(0.0, f64::max),
    )
}

/// Couplings with `α·d⁺ + β·d⁻ ≤ load` at every node.
fn loaded_config(g: &SignedGraph, rule: Rule, load: f64, split: f64) -> DynamicsConfig {
    let (dp, dm) = degree_caps(g);
    let alpha = if dp > 0.0 { load * split / dp } else { 0.5 };
    let beta = if dm > 0.0 { load * (1.0 - split) / dm } else { 0.0 };
    DynamicsConfig::new(rule, alpha.min(0.99), beta).unwrap()
}

#[test]
fn t2_reaches_bipartite_limit() {
    let g = fixtures::t2();
    let cfg = DynamicsConfig::opposing(0.2, 0.2).unwrap();
    let x0 = [1.0, 0.0, 0.5];
    let traj = simulate(&g, &cfg, &x0, 500).unwrap();
    let want = [1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0];
    assert!(max_diff(traj.final_state(), &want) < 1e-8);
    let p = predict_limit(&g, &cfg, &x0).unwrap();
    assert_eq!(p.kind, LimitKind::BipartiteConsensus);
    assert!(max_diff(p.limit.as_ref().unwrap(), &want) < 1e-15);
}

#[test]
fn t1_repelling_threshold_behaviour() {
    let g = fixtures::t1();
    let mut rng = seeded(3);
    let mut diverged = 0;
    for _ in 0..20 {
        let x0: Vec<f64> = (0..3).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let below = simulate(&g, &DynamicsConfig::repelling(0.2, 0.09).unwrap(), &x0, 100_000).unwrap();
        let avg0 = x0.iter().sum::<f64>() / 3.0;
        let end = below.final_state();
        assert!(spread(end) < 1e-8);
        let avg = end.iter().sum::<f64>() / 3.0;
        assert!((avg - avg0).abs() <= 1e-10 * avg0.abs().max(1e-300) || (avg - avg0).abs() < 1e-15);
        let above = simulate(&g, &DynamicsConfig::repelling(0.2, 0.11).unwrap(), &x0, 100_000).unwrap();
        if above.termination == Termination::Diverged {
            diverged += 1;
        }
    }
    assert!(diverged >= 19);
}

#[test]
fn d3_weighted_limit() {
    let g = fixtures::d3();
    let cfg = DynamicsConfig::opposing(0.2, 0.2).unwrap();
    let x0 = [1.0, 0.0, 0.5];
    let p = predict_limit(&g, &cfg, &x0).unwrap();
    let traj = simulate(&g, &cfg, &x0, 100_000).unwrap();
    assert!(max_diff(traj.final_state(), p.limit.as_ref().unwrap()) < 1e-8);
}

#[test]
fn random_digraph_limits_match_predictions() {
    let mut rng = seeded(2024);
    let mut checked = 0;
    while checked < 10 {
        let g = fixtures::random_strong_digraph(
            &mut rng,
            6,
            0.25,
            |_, _, _| Sign::Positive,
            |_, _, r| if unit_f64(r) < 0.5 { Sign::Negative } else { Sign::Positive },
        );
        if !g.has_negative_edges() {
            continue;
        }
        let cfg = loaded_config(&g, Rule::Repelling, 0.5, 0.8);
        let x0: Vec<f64> = (0..6).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let p = predict_limit(&g, &cfg, &x0).unwrap();
        if p.kind != LimitKind::WeightedConsensus {
            continue;
        }
        let traj = simulate(&g, &cfg, &x0, 200_000).unwrap();
        assert!(max_diff(traj.final_state(), p.limit.as_ref().unwrap()) < 1e-6);
        checked += 1;
    }
}

#[test]
fn continuous_flow_exact_and_rk4_agree() {
    let g = fixtures::t2();
    let x0 = [1.0, 0.0, 0.5];
    let exact = simulate_continuous(&g, Rule::Opposing, 1.0, 1.0, &x0, 50.0, 1e-3, ContinuousMethod::Exact, 1000).unwrap();
    let rk4 = simulate_continuous(&g, Rule::Opposing, 1.0, 1.0, &x0, 50.0, 1e-3, ContinuousMethod::Rk4, 1000).unwrap();
    let want = [1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0];
    assert!(max_diff(exact.final_state(), &want) < 1e-8);
    for (a, b) in exact.states.iter().zip(&rk4.states) {
        assert!(max_diff(a, b) < 1e-6);
    }
}

#[test]
fn alternating_trees_reach_modulus_consensus() {
    let a = SignedGraph::undirected(3, &[(0, 1, Sign::Positive), (1, 2, Sign::Negative)]).unwrap();
    let b = SignedGraph::undirected(3, &[(0, 2, Sign::Negative), (1, 2, Sign::Negative)]).unwrap();
    let seq = GraphSequence::new(vec![a, b], true).unwrap();
    assert!(check_joint_connectivity(&seq, 1));
    let cfg = DynamicsConfig::opposing(0.3, 0.3).unwrap();
    let out = simulate_switching(&seq, &cfg, &[1.0, -0.4, 0.5], 5000, 0.1, 1e-6).unwrap();
    assert!(out.modulus_consensus && out.modulus_spread < 1e-6);
    let bad = DynamicsConfig::opposing(0.3, 0.5).unwrap();
    assert!(matches!(
        simulate_switching(&seq, &bad, &[1.0, -0.4, 0.5], 10, 0.1, 1e-6),
        Err(signet_core::Error::StepConditionViolated { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn simulation_equals_matrix_powers(g in arb_signed_graph(8), seed in any::<u64>(), opposing in any::<bool>()) {
        let rule = if opposing { Rule::Opposing } else { Rule::Repelling };
        let cfg = loaded_config(&g, rule, 0.9, 0.6);
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let traj = simulate_with(&g, &cfg, &x0, 25, &SimOptions { stop_window: usize::MAX, ..SimOptions::default() }).unwrap();
        let u = to_nalgebra(&update_matrix(&g, &cfg));
        let x = u.pow(25) * nalgebra::DVector::from_vec(x0);
        prop_assume!(traj.steps == 25);
        prop_assert!(max_diff(traj.final_state(), x.as_slice()) < 1e-12 * x.amax().max(1.0));
    }

    #[test]
    fn opposing_steps_never_expand(g in arb_signed_graph(9), seed in any::<u64>(), load in 0.1..1.0f64, split in 0.05..0.95f64) {
        let cfg = loaded_config(&g, Rule::Opposing, load, split);
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let traj = simulate(&g, &cfg, &x0, 200).unwrap();
        for w in traj.h.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn repelling_conserves_the_average(g in arb_signed_graph(9), seed in any::<u64>(), beta in 0.0..0.5f64) {
        let cfg = loaded_config(&g, Rule::Repelling, 0.5, 1.0).with_beta(beta).unwrap();
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let traj = simulate(&g, &cfg, &x0, 50).unwrap();
        let s0: f64 = x0.iter().sum();
        for x in &traj.states {
            let s: f64 = x.iter().sum();
            prop_assert!((s - s0).abs() < 1e-12 * traj.norm.iter().cloned().fold(1.0, f64::max));
        }
    }

    #[test]
    fn opposing_predictions_match_simulation(g in arb_signed_graph(7), seed in any::<u64>(), split in 0.2..0.8f64) {
        let cfg = loaded_config(&g, Rule::Opposing, 0.8, split);
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let p = predict_limit(&g, &cfg, &x0).unwrap();
        let limit = p.limit.clone().unwrap();
        let traj = simulate(&g, &cfg, &x0, 2_000_000).unwrap();
        prop_assert!(max_diff(traj.final_state(), &limit) < 1e-6, "{:?} {:?}", p.kind, traj.final_state());
    }

    #[test]
    fn repelling_threshold_separates_behaviour(g in arb_signed_graph(7), seed in any::<u64>()) {
        prop_assume!(g.has_negative_edges() && g.diagnostics().positive_connected);
        let (dp, _) = degree_caps(&g);
        let alpha = 0.5 / dp;
        let star = critical_beta_deterministic(&g, alpha).unwrap();
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let below = DynamicsConfig::repelling(alpha, 0.8 * star).unwrap();
        let p = predict_limit(&g, &below, &x0).unwrap();
        prop_assert_eq!(p.kind, LimitKind::AverageConsensus);
        let traj = simulate(&g, &below, &x0, 2_000_000).unwrap();
        prop_assert!(max_diff(traj.final_state(), p.limit.as_ref().unwrap()) < 1e-6);
        let above = DynamicsConfig::repelling(alpha, 1.5 * star).unwrap();
        prop_assert_eq!(predict_limit(&g, &above, &x0).unwrap().kind, LimitKind::Divergent);
        let traj = simulate(&g, &above, &x0, 2_000_000).unwrap();
        prop_assert_eq!(traj.termination, Termination::Diverged);
        prop_assert!(norm_inf(traj.final_state()) > 1.0);
    }

    #[test]
    fn exact_flow_matches_rk4(g in arb_signed_graph(6), seed in any::<u64>(), opposing in any::<bool>()) {
        let rule = if opposing { Rule::Opposing } else { Rule::Repelling };
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let a = simulate_continuous(&g, rule, 0.5, 0.2, &x0, 2.0, 1e-3, ContinuousMethod::Exact, 100).unwrap();
        let b = simulate_continuous(&g, rule, 0.5, 0.2, &x0, 2.0, 1e-3, ContinuousMethod::Rk4, 100).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            prop_assert!(max_diff(x, y) < 1e-9 * norm_inf(x).max(1.0));
        }
    }
}
