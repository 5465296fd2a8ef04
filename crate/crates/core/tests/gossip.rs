mod common;

use common::*;
use proptest::prelude::*;
use signet_core::fixtures;
use signet_core::gossip::*;
use signet_core::laplacian::*;
use signet_core::rng::{seeded, uniform};
use signet_core::spectral::jacobi::symmetric_eigen;
use signet_core::Matrix;

#[test]
fn selection_frequencies_follow_mu() {
    let mut rng = seeded(8);
    for _ in 0..5 {
        let g = fixtures::random_signed(&mut rng, 7, 0.4, 0.3);
        let mut p = GossipProcess::new(g.clone(), 99).unwrap();
        let draws = 200_000usize;
        let mut hits = vec![0usize; g.edges().len()];
        for _ in 0..draws {
            hits[p.sample_pair()] += 1;
        }
        let chi2: f64 = hits
            .iter()
            .zip(p.mu())
            .map(|(&h, &m)| {
                let e = m * draws as f64;
                (h as f64 - e).powi(2) / e
            })
            .sum();
        let df = (hits.len() - 1) as f64;
        assert!(chi2 < df + 10.0 * (2.0 * df).sqrt(), "chi2 {chi2} df {df}");
    }
}

#[test]
fn per_run_streams_match_reseeding() {
    let p = GossipProcess::new(fixtures::t2(), 1000).unwrap();
    let mut a = p.for_run(7);
    let mut b = p.clone();
    b.reseed(1007);
    for _ in 0..100 {
        assert_eq!(a.sample_pair(), b.sample_pair());
    }
}

#[test]
fn clustered_state_is_absorbing() {
    let g = fixtures::k4_balanced();
    let cfg = DynamicsConfig::repelling(0.3, 10.0).unwrap().with_bound(1.0).unwrap();
    let x0 = [-1.0, -1.0, 1.0, 1.0];
    let mut p = GossipProcess::new(g, 4).unwrap();
    let run = run_trajectory(&mut p, &cfg, &x0, 10_000, &MonitorSpec::for_config(&cfg)).unwrap();
    assert_eq!(run.terminal(), x0.to_vec());
    assert!(run.monitor.label_since.iter().all(|&t| t == 0));
}

#[test]
fn mean_square_contraction_bounds_ensemble_decay() {
    let cases = [
        (fixtures::t1(), DynamicsConfig::repelling(0.5, 0.1).unwrap(), false),
        (fixtures::t2(), DynamicsConfig::opposing(0.2, 0.2).unwrap(), true),
    ];
    for (g, cfg, gauge) in cases {
        let mu = gossip_mu(&g).unwrap();
        let pm = expected_second_moment(&g, &cfg, &mu, gauge).unwrap();
        let lambda = symmetric_eigen(&(&pm - &Matrix::averaging(g.n())), 1e-14).unwrap().max();
        assert!(lambda < 1.0);
        let p = GossipProcess::new(g.clone(), 5).unwrap();
        let mut opts = MonteCarloOptions::for_config(&cfg);
        opts.monitor.curve_points = 40;
        let x0 = X0Spec::Uniform { lo: -1.0, hi: 1.0, seed: 17 };
        let r = monte_carlo(&p, &cfg, &x0, 10_000, 40, &opts).unwrap();
        let curve = r.mse_curve.unwrap().mean_square_error;
        assert_eq!(curve.len(), 41);
        // late ratios are dominated by a handful of slow runs; check the
        // early steps one by one and the whole horizon on average
        for w in curve[..21].windows(2) {
            assert!(w[1] / w[0] <= lambda + 0.02, "ratio {} vs {lambda}", w[1] / w[0]);
        }
        let mean_rate = (curve[40] / curve[0]).powf(1.0 / 40.0);
        assert!(mean_rate <= lambda + 0.01, "mean rate {mean_rate} vs {lambda}");
    }
}

#[test]
fn empirical_moment_on_unbalanced_triangle() {
    let g = fixtures::t1();
    let cfg = DynamicsConfig::repelling(0.5, 0.1).unwrap();
    let mut p = GossipProcess::new(g.clone(), 12).unwrap();
    let emp = empirical_second_moment(&mut p, &cfg, 100_000, false).unwrap();
    let exact = expected_second_moment(&g, &cfg, p.mu(), false).unwrap();
    assert!((&emp.mean - &exact).max_abs() < 0.01);
    assert!(emp.std_error.max_abs() < 0.01);
}

#[test]
fn summary_independent_of_thread_count() {
    let g = fixtures::c4d();
    let cfg = DynamicsConfig::repelling(0.7, 10.0).unwrap().with_bound(1.0).unwrap();
    let p = GossipProcess::new(g, 31).unwrap();
    let opts = MonteCarloOptions::for_config(&cfg);
    let x0 = X0Spec::Uniform { lo: -1.0, hi: 1.0, seed: 3 };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| monte_carlo(&p, &cfg, &x0, 24, 5_000, &opts).unwrap().summary.to_json())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn projected_states_stay_in_the_box(g in arb_signed_graph(7), seed in any::<u64>(), a in 0.1..5.0f64, beta in 0.0..20.0f64, alpha in 0.01..0.99f64, opposing in any::<bool>()) {
        let rule = if opposing { Rule::Opposing } else { Rule::Repelling };
        let cfg = DynamicsConfig::new(rule, alpha, beta).unwrap().with_bound(a).unwrap();
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -a, a)).collect();
        let mut p = GossipProcess::new(g, seed).unwrap();
        let mut spec = MonitorSpec::for_config(&cfg);
        spec.record_every = Some(1);
        let run = run_trajectory(&mut p, &cfg, &x0, 2_000, &spec).unwrap();
        for row in &run.trajectory.unwrap().states {
            prop_assert!(row.iter().all(|v| v.abs() <= a));
        }
    }

    #[test]
    fn runs_are_reproducible(g in arb_signed_graph(7), seed in any::<u64>()) {
        let cfg = DynamicsConfig::repelling(0.3, 0.4).unwrap();
        let x0: Vec<f64> = (0..g.n()).map(|i| i as f64 / 3.0 - 0.5).collect();
        let spec = MonitorSpec::for_config(&cfg);
        let mut p1 = GossipProcess::new(g.clone(), seed).unwrap();
        let mut p2 = GossipProcess::new(g, seed).unwrap();
        let a = run_trajectory(&mut p1, &cfg, &x0, 3_000, &spec).unwrap();
        let b = run_trajectory(&mut p2, &cfg, &x0, 3_000, &spec).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn zero_state_is_absorbing(g in arb_signed_graph(7), seed in any::<u64>(), beta in 0.0..10.0f64, opposing in any::<bool>()) {
        let rule = if opposing { Rule::Opposing } else { Rule::Repelling };
        let cfg = DynamicsConfig::new(rule, 0.4, beta).unwrap();
        let mut p = GossipProcess::new(g.clone(), seed).unwrap();
        let run = run_trajectory(&mut p, &cfg, &vec![0.0; g.n()], 2_000, &MonitorSpec::for_config(&cfg)).unwrap();
        prop_assert!(run.terminal().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn extreme_state_never_collapses_faster_than_the_bound(g in arb_signed_graph(7), seed in any::<u64>(), alpha in 0.01..0.99f64, beta in 3.0..10.0f64) {
        prop_assume!((alpha - 0.5).abs() > 1e-3);
        let cfg = DynamicsConfig::opposing(alpha, beta).unwrap();
        let mut rng = seeded(seed);
        let x0: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let mut spec = MonitorSpec::for_config(&cfg);
        spec.extreme_floor = true;
        let mut p = GossipProcess::new(g, seed).unwrap();
        let run = run_trajectory(&mut p, &cfg, &x0, 2_000, &spec).unwrap();
        prop_assert_eq!(run.monitor.extreme_floor_violations, 0);
    }
}
