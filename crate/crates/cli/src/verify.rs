//! Acceptance suite. Every criterion rebuilds its scenario from scratch and
//! compares against an independent reference: closed forms worked out by
//! hand, brute-force enumeration, or a second numerical route.

use std::time::Instant;

use signet_core::deterministic::{
    check_joint_connectivity, predict_limit, simulate, simulate_continuous, simulate_switching,
    ContinuousMethod, GraphSequence, LimitKind, Termination,
};
use signet_core::fixtures;
use signet_core::gossip::{
    empirical_second_moment, monte_carlo, GossipProcess, MonteCarloOptions, MonteCarloResult, Outcome, X0Spec,
};
use signet_core::graph::{BalanceVerdict, Sign};
use signet_core::laplacian::{
    build_matrices, expected_second_moment, gossip_mu, quadratic_form, update_matrix, DynamicsConfig, Rule,
};
use signet_core::matrix::{norm_inf, spread};
use signet_core::rng::{seeded, uniform, unit_f64, SimRng};
use signet_core::spectral::{
    critical_beta_deterministic, critical_beta_gossip, is_eventually_positive, symmetric_eigen, PositivityVerdict,
};
use signet_core::{Matrix, SignedGraph};

use crate::args::{Format, RunConfig, X0Arg};
use crate::commands::{emit, gossip};

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:02} {}: {}", self.id, self.title, self.detail)
    }
}

type Check = fn() -> CriterionReport;

pub const CRITERIA: [(u8, Check); 17] = [
    (1, criterion_01),
    (2, criterion_02),
    (3, criterion_03),
    (4, criterion_04),
    (5, criterion_05),
    (6, criterion_06),
    (7, criterion_07),
    (8, criterion_08),
    (9, criterion_09),
    (10, criterion_10),
    (11, criterion_11),
    (12, criterion_12),
    (13, criterion_13),
    (14, criterion_14),
    (15, criterion_15),
    (16, criterion_16),
    (17, criterion_17),
];

/// Runs the selected criteria (all when `only` is empty) in id order.
pub fn run(only: &[u8]) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|(id, _)| only.is_empty() || only.contains(id))
        .map(|(_, f)| f())
        .collect()
}

fn report(id: u8, title: &'static str, outcome: Result<String, String>) -> CriterionReport {
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionReport {
        id,
        title,
        passed,
        detail,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_state(rng: &mut SimRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect()
}

const BIPARTITE_T2: [f64; 3] = [1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0];

pub fn criterion_01() -> CriterionReport {
    let title = "opposing dynamics on a balanced triangle reach bipartite consensus";
    report(1, title, (|| {
        let cfg = DynamicsConfig::opposing(0.2, 0.2).map_err(err)?;
        let start = Instant::now();
        let traj = simulate(&fixtures::t2(), &cfg, &[1.0, 0.0, 0.5], 500).map_err(err)?;
        let secs = start.elapsed().as_secs_f64();
        let d = max_diff(traj.final_state(), &BIPARTITE_T2);
        ensure(d < 1e-8, || format!("distance {d:e} after {} steps", traj.steps))?;
        ensure(secs < 1.0, || format!("took {secs} s"))?;
        Ok(format!("distance {d:.1e} after {} steps in {:.1} ms", traj.steps, secs * 1e3))
    })())
}

pub fn criterion_02() -> CriterionReport {
    let title = "opposing dynamics on an unbalanced triangle collapse to zero";
    report(2, title, (|| {
        let cfg = DynamicsConfig::opposing(0.2, 0.2).map_err(err)?;
        let g = fixtures::t1();
        let mut rng = seeded(2);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let x0 = random_state(&mut rng, 3);
            let traj = simulate(&g, &cfg, &x0, 5000).map_err(err)?;
            worst = worst.max(norm_inf(traj.final_state()));
        }
        ensure(worst < 1e-8, || format!("largest terminal |x| {worst:e}"))?;
        Ok(format!("20/20 runs, largest terminal |x| {worst:.1e}"))
    })())
}

pub fn criterion_03() -> CriterionReport {
    let title = "repelling threshold on the unbalanced triangle";
    report(3, title, (|| {
        let g = fixtures::t1();
        // on (1, 0, −1): 1 − α + 2β = 1 gives β* = α/2
        let star = critical_beta_deterministic(&g, 0.2).map_err(err)?;
        ensure((star - 0.1).abs() < 1e-6, || format!("beta* = {star}"))?;

        let x0 = [1.0, 0.0, 0.5];
        let avg0 = x0.iter().sum::<f64>() / 3.0;
        let below = DynamicsConfig::repelling(0.2, 0.09).map_err(err)?;
        let traj = simulate(&g, &below, &x0, 100_000).map_err(err)?;
        let end = traj.final_state();
        let s = spread(end);
        let drift = (end.iter().sum::<f64>() / 3.0 - avg0).abs() / avg0.abs();
        ensure(s < 1e-8 && drift < 1e-10, || format!("beta 0.09: spread {s:e}, average drift {drift:e}"))?;

        let above = DynamicsConfig::repelling(0.2, 0.11).map_err(err)?;
        let mut rng = seeded(3);
        let mut diverged = 0;
        for _ in 0..20 {
            let x = random_state(&mut rng, 3);
            let t = simulate(&g, &above, &x, 100_000).map_err(err)?;
            let declared = predict_limit(&g, &above, &x).map_err(err)?.kind == LimitKind::Divergent;
            if declared && t.termination == Termination::Diverged && spread(t.final_state()) > 1e8 {
                diverged += 1;
            }
        }
        ensure(diverged >= 19, || format!("beta 0.11: {diverged}/20 divergent"))?;
        Ok(format!(
            "beta* = {star:.9}; beta 0.09 spread {s:.1e}, drift {drift:.1e}; beta 0.11 divergent {diverged}/20"
        ))
    })())
}

fn random_valid_digraph(rng: &mut SimRng, opposing: bool) -> Option<(SignedGraph, DynamicsConfig)> {
    let g = if opposing {
        let labels: Vec<usize> = (0..6).map(|_| usize::from(unit_f64(rng) < 0.5)).collect();
        let l2 = labels.clone();
        let sign = move |u: usize, v: usize, _: &mut SimRng| {
            if labels[u] == labels[v] {
                Sign::Positive
            } else {
                Sign::Negative
            }
        };
        let sign2 = move |u: usize, v: usize, _: &mut SimRng| {
            if l2[u] == l2[v] {
                Sign::Positive
            } else {
                Sign::Negative
            }
        };
        fixtures::random_strong_digraph(rng, 6, 0.25, sign, sign2)
    } else {
        fixtures::random_strong_digraph(
            rng,
            6,
            0.25,
            |_, _, _| Sign::Positive,
            |_, _, r| if unit_f64(r) < 0.5 { Sign::Negative } else { Sign::Positive },
        )
    };
    if !g.has_negative_edges() {
        return None;
    }
    let b = build_matrices(&g);
    let dp = (0..6).map(|i| b.d_plus[(i, i)]).fold(0.0, f64::max);
    let dm = (0..6).map(|i| b.d_minus[(i, i)]).fold(0.0, f64::max);
    let (rule, alpha, beta) = if opposing {
        (Rule::Opposing, 0.4 / dp.max(1.0), 0.4 / dm)
    } else {
        (Rule::Repelling, 0.4 / dp, 0.1 / dm)
    };
    let cfg = DynamicsConfig::new(rule, alpha.min(0.9), beta).ok()?;
    Some((g, cfg))
}

pub fn criterion_04() -> CriterionReport {
    let title = "directed limits match the left-eigenvector predictions";
    report(4, title, (|| {
        let mut cases = vec![(fixtures::d3(), DynamicsConfig::opposing(0.2, 0.2).map_err(err)?)];
        let mut rng = seeded(4);
        let mut attempts = 0;
        while cases.len() < 11 {
            attempts += 1;
            if attempts > 1000 {
                return Err(format!("only {} valid digraphs found", cases.len() - 1));
            }
            let opposing = cases.len() % 2 == 0;
            if let Some(c) = random_valid_digraph(&mut rng, opposing) {
                cases.push(c);
            }
        }
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for (g, cfg) in &cases {
            let x0 = random_state(&mut rng, g.n());
            let pred = predict_limit(g, cfg, &x0).map_err(err)?;
            let Some(limit) = pred.limit.as_ref() else {
                return Err(format!("no limit predicted ({:?})", pred.kind));
            };
            let traj = simulate(g, cfg, &x0, 1_000_000).map_err(err)?;
            worst = worst.max(max_diff(traj.final_state(), limit));
            checked += 1;
        }
        ensure(worst < 1e-6, || format!("largest deviation {worst:e}"))?;
        Ok(format!("{checked} digraphs, largest deviation {worst:.1e}"))
    })())
}

pub fn criterion_05() -> CriterionReport {
    let title = "eventual positivity of the repelling update";
    report(5, title, (|| {
        let g = fixtures::t1();
        let m = update_matrix(&g, &DynamicsConfig::repelling(0.2, 0.05).map_err(err)?);
        let r = is_eventually_positive(&m, 200).map_err(err)?;
        let k0 = r.witness.ok_or_else(|| format!("no witness ({:?})", r.verdict))?;
        ensure(r.verdict == PositivityVerdict::Positive && k0 <= 200, || format!("{r:?}"))?;
        let w = update_matrix(&g, &DynamicsConfig::opposing(0.2, 0.2).map_err(err)?);
        let rw = is_eventually_positive(&w, 200).map_err(err)?;
        ensure(rw.verdict != PositivityVerdict::Positive, || "opposing update passed".into())?;
        Ok(format!("M positive from power {k0}; W verdict {:?}", rw.verdict))
    })())
}

pub fn criterion_06() -> CriterionReport {
    let title = "continuous opposing flow and its two integrators";
    report(6, title, (|| {
        let g = fixtures::t2();
        let x0 = [1.0, 0.0, 0.5];
        let run = |m| simulate_continuous(&g, Rule::Opposing, 1.0, 1.0, &x0, 50.0, 1e-3, m, 100);
        let exact = run(ContinuousMethod::Exact).map_err(err)?;
        let rk4 = run(ContinuousMethod::Rk4).map_err(err)?;
        let d = max_diff(exact.final_state(), &BIPARTITE_T2);
        let gap = exact
            .states
            .iter()
            .zip(&rk4.states)
            .map(|(a, b)| max_diff(a, b))
            .fold(0.0, f64::max);
        ensure(exact.states.len() == rk4.states.len(), || "grids differ".into())?;
        ensure(d < 1e-8 && gap < 1e-6, || format!("limit distance {d:e}, exact vs rk4 {gap:e}"))?;
        Ok(format!("limit distance {d:.1e}, exact vs rk4 {gap:.1e}"))
    })())
}

pub fn criterion_07() -> CriterionReport {
    let title = "switching spanning trees reach modulus consensus";
    report(7, title, (|| {
        let a = SignedGraph::undirected(3, &[(0, 1, Sign::Positive), (1, 2, Sign::Negative)]).map_err(err)?;
        let b = SignedGraph::undirected(3, &[(0, 2, Sign::Negative), (1, 2, Sign::Negative)]).map_err(err)?;
        let seq = GraphSequence::new(vec![a, b], true).map_err(err)?;
        ensure(check_joint_connectivity(&seq, 1), || "not jointly connected".into())?;
        let cfg = DynamicsConfig::opposing(0.3, 0.3).map_err(err)?;
        let out = simulate_switching(&seq, &cfg, &[1.0, -0.4, 0.5], 5000, 0.1, 1e-6).map_err(err)?;
        ensure(out.modulus_spread < 1e-6, || format!("modulus spread {:e}", out.modulus_spread))?;
        Ok(format!("|x| -> {:.6}, spread {:.1e}", out.y_star, out.modulus_spread))
    })())
}

pub fn criterion_08() -> CriterionReport {
    let title = "empirical second moments match the analytic expectation";
    report(8, title, (|| {
        let cfg = DynamicsConfig::opposing(0.2, 0.2).map_err(err)?;
        let mut worst = Vec::new();
        for (g, gauge) in [(fixtures::t2(), true), (fixtures::t1(), false)] {
            let mut p = GossipProcess::new(g.clone(), 8).map_err(err)?;
            let emp = empirical_second_moment(&mut p, &cfg, 100_000, gauge).map_err(err)?;
            let exact = expected_second_moment(&g, &cfg, p.mu(), gauge).map_err(err)?;
            worst.push((&emp.mean - &exact).max_abs());
        }
        ensure(worst.iter().all(|&d| d < 0.01), || format!("max-abs gaps {worst:?}"))?;
        Ok(format!("max-abs gap {:.1e} (balanced, gauged), {:.1e} (unbalanced)", worst[0], worst[1]))
    })())
}

fn ensemble(
    g: SignedGraph,
    cfg: &DynamicsConfig,
    x0: X0Spec,
    runs: usize,
    horizon: usize,
    tune: impl FnOnce(&mut MonteCarloOptions),
) -> Result<MonteCarloResult, String> {
    let p = GossipProcess::new(g, 0x5eed).map_err(err)?;
    let mut opts = MonteCarloOptions::for_config(cfg);
    tune(&mut opts);
    monte_carlo(&p, cfg, &x0, runs, horizon, &opts).map_err(err)
}

fn uniform_box(a: f64, seed: u64) -> X0Spec {
    X0Spec::Uniform { lo: -a, hi: a, seed }
}

pub fn criterion_09() -> CriterionReport {
    let title = "mean-square threshold of repelling gossip";
    report(9, title, (|| {
        let g = fixtures::t1();
        let mu = gossip_mu(&g).map_err(err)?;
        let star = critical_beta_gossip(&g, 0.5, &mu).map_err(err)?;
        // λ₂ of the weighted positive Laplacian is 1/3 and the top of the
        // negative one 2/3, so r = (1/2)·α(1 − α) = 1/8
        let r: f64 = 0.125;
        let closed = 2.0 * r / (1.0 + (1.0 + 4.0 * r).sqrt());
        ensure((star - closed).abs() < 1e-6 && (star - 0.1123724).abs() < 1e-6, || format!("beta* = {star}"))?;
        let cfg = DynamicsConfig::repelling(0.5, 0.9 * star).map_err(err)?;
        let pm = expected_second_moment(&g, &cfg, &mu, false).map_err(err)?;
        let lambda = symmetric_eigen(&(&pm - &Matrix::averaging(3)), 1e-14).map_err(err)?.max();
        ensure(lambda < 1.0, || format!("contraction factor {lambda}"))?;
        let res = ensemble(g, &cfg, uniform_box(1.0, 9), 200, 10_000, |o| o.error_curve = false)?;
        let mut close = 0;
        for (r, (state, scale)) in res.summary.terminal_states.iter().zip(&res.summary.terminal_log2_scale).enumerate() {
            let x0 = uniform_box(1.0, 9).for_run(3, r);
            let avg = x0.iter().sum::<f64>() / 3.0;
            let f = 2f64.powi(*scale);
            if state.iter().all(|v| (v * f - avg).abs() <= 1e-2) {
                close += 1;
            }
        }
        ensure(close >= 195, || format!("{close}/200 runs near the average"))?;
        Ok(format!("beta* = {star:.7}, contraction {lambda:.4}, {close}/200 runs at the average"))
    })())
}

pub fn criterion_10() -> CriterionReport {
    let title = "opposing gossip on a balanced triangle";
    report(10, title, (|| {
        let cfg = DynamicsConfig::opposing(0.2, 0.2).map_err(err)?;
        let res = ensemble(fixtures::t2(), &cfg, uniform_box(1.0, 10), 200, 10_000, |o| {
            o.monitor.curve_points = 10_000;
        })?;
        let hits = res.summary.count(Outcome::BipartiteConsensus);
        ensure(hits == 200, || format!("{hits}/200 bipartite consensus"))?;
        let curve = res.mse_curve.ok_or("no error curve")?.mean_square_error;
        let window = 100;
        let smooth: Vec<f64> = curve.windows(window).map(|w| w.iter().sum::<f64>() / window as f64).collect();
        // slack for rounding once the error reaches the floating-point floor
        let slack = 1e-15 * curve[0];
        let rises = smooth.windows(2).filter(|w| w[1] > w[0] + slack).count();
        ensure(rises == 0, || format!("smoothed error rises {rises} times"))?;
        Ok(format!(
            "200/200 bipartite consensus; smoothed error {:.2e} -> {:.2e}, nonincreasing",
            smooth[0],
            smooth[smooth.len() - 1]
        ))
    })())
}

pub fn criterion_11() -> CriterionReport {
    let title = "per-event lower bound on the extreme state";
    report(11, title, (|| {
        let cfg = DynamicsConfig::opposing(0.3, 3.0).map_err(err)?;
        let mut counts = Vec::new();
        for g in [fixtures::t2(), fixtures::t1()] {
            let res = ensemble(g, &cfg, uniform_box(1.0, 11), 100, 1000, |o| {
                o.monitor.extreme_floor = true;
                o.error_curve = false;
            })?;
            counts.push(res.summary.extreme_floor_violations.ok_or("monitor disabled")?);
        }
        ensure(counts.iter().all(|&c| c == 0), || format!("violations {counts:?}"))?;
        Ok("0 violations over 2 x 100 runs x 1000 events".into())
    })())
}

fn clustering(id: u8, title: &'static str, g: SignedGraph, groups: usize, need: f64, opposite: bool) -> CriterionReport {
    report(id, title, (|| {
        let cfg = DynamicsConfig::repelling(0.3, 10.0).and_then(|c| c.with_bound(1.0)).map_err(err)?;
        let res = ensemble(g, &cfg, uniform_box(1.0, id as u64), 200, 100_000, |o| o.error_curve = false)?;
        let s = &res.summary;
        let good = s
            .outcomes
            .iter()
            .zip(&s.group_labels)
            .filter(|(o, l)| {
                **o == Outcome::BoundaryClustering
                    && l.as_ref().is_some_and(|l| l.len() == groups && (!opposite || l[0] == -l[1]))
            })
            .count();
        let frac = good as f64 / s.runs as f64;
        ensure(frac >= need, || format!("{good}/{} clustered ({:?})", s.runs, s.verdicts))?;
        Ok(format!("{good}/{} runs clustered on the boundary by group", s.runs))
    })())
}

pub fn criterion_12() -> CriterionReport {
    clustering(
        12,
        "projected gossip on a balanced complete graph clusters on opposite boundaries",
        fixtures::k4_balanced(),
        2,
        0.95,
        true,
    )
}

pub fn criterion_13() -> CriterionReport {
    clustering(
        13,
        "projected gossip on a three-group complete graph clusters by group",
        fixtures::k4_three_groups(),
        3,
        0.90,
        false,
    )
}

pub fn criterion_14() -> CriterionReport {
    let title = "projected gossip with strong positive coupling oscillates";
    report(14, title, (|| {
        let g = fixtures::c4d();
        ensure(g.diagnostics().positive_vertex_connectivity_ge_2, || "positive part has a cut vertex".into())?;
        let cfg = DynamicsConfig::repelling(0.7, 10.0).and_then(|c| c.with_bound(1.0)).map_err(err)?;
        let res = ensemble(g, &cfg, uniform_box(1.0, 14), 100, 1_000_000, |o| o.error_curve = false)?;
        let hits = res.summary.count(Outcome::Oscillating);
        ensure(hits >= 90, || format!("{hits}/100 oscillating ({:?})", res.summary.verdicts))?;
        Ok(format!("{hits}/100 runs oscillating between the boundaries"))
    })())
}

fn bipartition_exists(g: &SignedGraph) -> bool {
    let n = g.n();
    (0u32..(1 << (n - 1))).any(|mask| {
        let side = |v: usize| v == 0 || mask & (1 << (v - 1)) == 0;
        g.edges()
            .iter()
            .all(|e| (side(e.from) == side(e.to)) != e.sign.is_negative())
    })
}

/// Negative-edge count of every simple cycle, each cycle once.
fn cycle_parities(g: &SignedGraph) -> Vec<usize> {
    let n = g.n();
    let mut sign = vec![vec![None; n]; n];
    for e in g.edges() {
        sign[e.from][e.to] = Some(e.sign.is_negative());
        sign[e.to][e.from] = Some(e.sign.is_negative());
    }
    fn walk(root: usize, at: usize, first: usize, neg: usize, sign: &[Vec<Option<bool>>], used: &mut [bool], out: &mut Vec<usize>) {
        for next in (root + 1)..sign.len() {
            let Some(s) = sign[at][next] else { continue };
            if used[next] {
                continue;
            }
            let neg2 = neg + usize::from(s);
            let first2 = if at == root { next } else { first };
            if let Some(back) = sign[next][root] {
                if at != root && first2 < next {
                    out.push(neg2 + usize::from(back));
                }
            }
            used[next] = true;
            walk(root, next, first2, neg2, sign, used, out);
            used[next] = false;
        }
    }
    let mut out = Vec::new();
    for root in 0..n {
        let mut used = vec![false; n];
        used[root] = true;
        walk(root, root, root, 0, &sign, &mut used, &mut out);
    }
    out
}

fn random_test_graph(rng: &mut SimRng, max_n: usize, k: usize) -> SignedGraph {
    let n = 3 + (unit_f64(rng) * (max_n - 2) as f64) as usize;
    let n = n.min(max_n);
    let p_extra = unit_f64(rng) * 0.6;
    if k.is_multiple_of(2) {
        let groups = 2 + usize::from(k.is_multiple_of(4));
        let labels = fixtures::random_groups(rng, n, groups);
        fixtures::random_grouped(rng, &labels, p_extra)
    } else {
        let p_neg = 0.1 + 0.8 * unit_f64(rng);
        fixtures::random_signed(rng, n, p_extra, p_neg)
    }
}

pub fn criterion_15() -> CriterionReport {
    let title = "balance verdicts agree with brute force";
    report(15, title, (|| {
        let mut rng = seeded(15);
        let (mut strong, mut skipped) = (0, 0);
        for k in 0..500 {
            let g = random_test_graph(&mut rng, 12, k);
            let r = g.check_structural_balance().map_err(err)?;
            if r.negative_edges_absent {
                skipped += 1;
                continue;
            }
            let brute = bipartition_exists(&g);
            ensure((r.verdict == BalanceVerdict::StronglyBalanced) == brute, || {
                format!("bipartition mismatch on\n{}", g.to_text())
            })?;
            strong += usize::from(brute);
        }
        let (mut weak_yes, mut cycles_checked) = (0, 0);
        for k in 0..500 {
            let g = random_test_graph(&mut rng, 8, k);
            if !g.has_negative_edges() {
                continue;
            }
            let par = cycle_parities(&g);
            let s = g.check_structural_balance().map_err(err)?.verdict == BalanceVerdict::StronglyBalanced;
            let w = g.check_weak_balance().map_err(err)?.is_balanced();
            ensure(s == par.iter().all(|c| c % 2 == 0), || format!("strong parity mismatch on\n{}", g.to_text()))?;
            ensure(w == par.iter().all(|&c| c != 1), || format!("weak parity mismatch on\n{}", g.to_text()))?;
            weak_yes += usize::from(w);
            cycles_checked += par.len();
        }
        Ok(format!(
            "500 bipartition checks ({strong} balanced, {skipped} without negative edges); \
             500 cycle checks over {cycles_checked} cycles ({weak_yes} weakly balanced)"
        ))
    })())
}

pub fn criterion_16() -> CriterionReport {
    let title = "edge-sum and matrix quadratic forms agree";
    report(16, title, (|| {
        let mut rng = seeded(16);
        let mut worst: f64 = 0.0;
        for k in 0..1000 {
            let g = random_test_graph(&mut rng, 15, k);
            let x: Vec<f64> = (0..g.n()).map(|_| uniform(&mut rng, -2.0, 2.0)).collect();
            let b = build_matrices(&g);
            for rule in [Rule::Opposing, Rule::Repelling] {
                let edge = quadratic_form(&g, rule, &x).map_err(err)?;
                let lx = b.signed_laplacian(rule).mul_vec(&x);
                let mat: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
                // relative to the size of the summands, which is what rounding scales with
                let scale: f64 = g
                    .edges()
                    .iter()
                    .map(|e| e.weight * (x[e.from].abs() + x[e.to].abs()).powi(2))
                    .sum::<f64>()
                    .max(f64::MIN_POSITIVE);
                worst = worst.max((edge - mat).abs() / scale);
            }
        }
        ensure(worst <= 1e-12, || format!("largest relative gap {worst:e}"))?;
        Ok(format!("2000 comparisons, largest relative gap {worst:.1e}"))
    })())
}

pub fn criterion_17() -> CriterionReport {
    let title = "gossip output is reproducible byte for byte";
    report(17, title, (|| {
        let base = std::env::temp_dir().join(format!("signet-verify-{}-{}", std::process::id(), unique()));
        std::fs::create_dir_all(&base).map_err(err)?;
        let graph = base.join("c4d.graph");
        std::fs::write(&graph, fixtures::c4d().to_text()).map_err(err)?;
        let mut bytes = Vec::new();
        for k in 0..2 {
            let out = base.join(format!("run{k}"));
            let rc = RunConfig {
                graph: Some(graph.clone()),
                rule: Some(Rule::Repelling),
                alpha: Some(0.7),
                beta: Some(10.0),
                bound: Some(1.0),
                x0: Some(X0Arg::Uniform { lo: -1.0, hi: 1.0, seed: 5 }),
                steps: Some(20_000),
                runs: Some(16),
                seed: 1234,
                out: Some(out.clone()),
                format: Format::Csv,
                continuous: false,
                t_end: None,
                dt: None,
                method: None,
                record_every: None,
                extreme_floor: false,
                survivors: false,
                dump_runs: false,
            };
            let artifacts = gossip(&rc).map_err(err)?;
            emit(&artifacts, Some(&out)).map_err(err)?;
            bytes.push(std::fs::read(out.join("summary.json")).map_err(err)?);
        }
        let _ = std::fs::remove_dir_all(&base);
        ensure(bytes[0] == bytes[1], || "summaries differ".into())?;
        Ok(format!("two runs wrote identical {}-byte summaries", bytes[0].len()))
    })())
}

fn unique() -> u64 {
    use std::sync::atomic::{AtomicU64, Ordering};
    static NEXT: AtomicU64 = AtomicU64::new(0);
    NEXT.fetch_add(1, Ordering::Relaxed)
}
