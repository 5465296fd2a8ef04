//! Randomised pairwise (gossip) dynamics over undirected signed graphs.
//!
//! One event picks an edge `{i, j}` with probability `μ({i,j})` and updates
//! both endpoints: positive edges average, negative edges oppose or repel.
//! With a state bound `A` every updated value is clipped to `[−A, A]`.
//!
//! Unbounded runs can grow past the range of `f64`. The state is then kept
//! as `x·2^scale`: whenever an entry exceeds `2^600` the whole vector is
//! multiplied by `2^−600`, which is exact and commutes with the linear
//! updates.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::deterministic::{Clock, LimitKind, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::graph::{SignedEdge, SignedGraph};
use crate::laplacian::{gossip_mu, validate_mu, DynamicsConfig, Rule};
use crate::matrix::{norm_inf, spread, Matrix};
use crate::rng::{rng_for_run, seeded, uniform, unit_f64, SimRng};
use crate::spectral::critical_beta_gossip;

const RESCALE_EXP: i32 = 600;

/// Edge sampler bound to a graph, a selection distribution and a seed.
#[derive(Debug, Clone)]
pub struct GossipProcess {
    graph: SignedGraph,
    mu: Vec<f64>,
    cdf: Vec<f64>,
    seed: u64,
    rng: SimRng,
}

impl GossipProcess {
    /// Uses the node-wakes-then-picks-a-neighbour distribution.
    pub fn new(graph: SignedGraph, seed: u64) -> Result<Self> {
        let mu = gossip_mu(&graph)?;
        Self::with_mu(graph, mu, seed)
    }

    /// `mu` is aligned with `graph.edges()`.
    pub fn with_mu(graph: SignedGraph, mu: Vec<f64>, seed: u64) -> Result<Self> {
        if graph.is_directed() {
            return Err(Error::DirectedGraphUnsupported);
        }
        if graph.edges().is_empty() {
            return Err(Error::InvalidParameter("graph has no edges".into()));
        }
        validate_mu(&graph, &mu)?;
        let mut acc = 0.0;
        let cdf = mu
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(GossipProcess {
            graph,
            mu,
            cdf,
            seed,
            rng: seeded(seed),
        })
    }

    pub fn graph(&self) -> &SignedGraph {
        &self.graph
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Restarts the stream from `seed`.
    pub fn reseed(&mut self, seed: u64) {
        self.seed = seed;
        self.rng = seeded(seed);
    }

    /// Copy whose stream is that of run `run` (seed `self.seed + run`).
    pub fn for_run(&self, run: usize) -> GossipProcess {
        GossipProcess {
            rng: rng_for_run(self.seed, run),
            ..self.clone()
        }
    }

    /// Index into `graph().edges()` of the next selected edge, by inverse
    /// CDF over the edge table.
    pub fn sample_pair(&mut self) -> usize {
        let total = *self.cdf.last().expect("non-empty edge table");
        let u = unit_f64(&mut self.rng) * total;
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }

    pub fn sample_edge(&mut self) -> SignedEdge {
        let k = self.sample_pair();
        self.graph.edges()[k]
    }
}

/// Effective coefficient and form of one edge:
/// `x_s ← (1 − θ)x_s + θ·x_other` for `(θ, +1)` and
/// `x_s ← (1 − θ)x_s − θ·x_other` for `(θ, −1)`.
fn edge_update(edge: &SignedEdge, cfg: &DynamicsConfig) -> (f64, f64) {
    match (edge.sign.is_negative(), cfg.rule()) {
        (false, _) => (cfg.alpha() * edge.weight, 1.0),
        (true, Rule::Opposing) => (cfg.beta() * edge.weight, -1.0),
        (true, Rule::Repelling) => (-cfg.beta() * edge.weight, 1.0),
    }
}

/// Applies one pairwise update in place; only the two endpoints change.
pub fn gossip_step(x: &mut [f64], edge: &SignedEdge, cfg: &DynamicsConfig) {
    let (theta, s) = edge_update(edge, cfg);
    let (i, j) = (edge.from, edge.to);
    let (xi, xj) = (x[i], x[j]);
    let mut ni = (1.0 - theta) * xi + s * theta * xj;
    let mut nj = (1.0 - theta) * xj + s * theta * xi;
    if let Some(a) = cfg.bound() {
        ni = ni.clamp(-a, a);
        nj = nj.clamp(-a, a);
    }
    x[i] = ni;
    x[j] = nj;
}

/// The realised (unclipped) event matrix `W_t` of an edge.
pub fn step_matrix(n: usize, edge: &SignedEdge, cfg: &DynamicsConfig) -> Matrix {
    let (theta, s) = edge_update(edge, cfg);
    let mut w = Matrix::identity(n);
    let (i, j) = (edge.from, edge.to);
    w[(i, i)] = 1.0 - theta;
    w[(j, j)] = 1.0 - theta;
    w[(i, j)] = s * theta;
    w[(j, i)] = s * theta;
    w
}

/// `min{|2α − 1|, 1/2}`: with the opposing rule, `α ≠ 1/2` and `β ≥ 3`,
/// every event satisfies `h(t+1) ≥ c·h(t)` where `h = max_i |x_i|`.
pub fn extreme_floor_constant(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) || alpha == 0.5 {
        return Err(Error::ParameterRangeViolation(format!(
            "the lower bound needs alpha in (0, 1) other than 1/2, got {alpha}"
        )));
    }
    if !(beta >= 3.0) {
        return Err(Error::ParameterRangeViolation(format!(
            "the lower bound needs beta >= 3, got {beta}"
        )));
    }
    Ok((2.0 * alpha - 1.0).abs().min(0.5))
}

/// Counts recorded steps with `h(t+1) < c·h(t) − 1e−12·max(1, h(t))`.
/// Meaningful for trajectories recorded at every event.
pub fn extreme_floor_monitor(traj: &Trajectory, cfg: &DynamicsConfig) -> Result<usize> {
    if cfg.rule() != Rule::Opposing {
        return Err(Error::ParameterRangeViolation(
            "the lower bound concerns the opposing rule".into(),
        ));
    }
    let c = extreme_floor_constant(cfg.alpha(), cfg.beta())?;
    Ok(traj
        .h
        .windows(2)
        .filter(|w| w[1] < c * w[0] - 1e-12 * w[0].max(1.0))
        .count())
}

/// What to watch during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSpec {
    /// Distance from `±A` that counts as touching the boundary.
    pub touch_eps: f64,
    /// Distance from `±A` that counts as sitting on the boundary.
    pub cluster_tol: f64,
    /// Check the per-event lower bound on `h` (opposing, α ≠ 1/2, β ≥ 3).
    pub extreme_floor: bool,
    /// Track which nodes (opposing) or pairs (repelling) exceed
    /// `survivor_threshold` in magnitude at some time.
    pub survivor: bool,
    pub survivor_threshold: f64,
    /// Record `‖x(t) − reference‖²` at up to `curve_points + 1` times.
    pub reference: Option<Vec<f64>>,
    pub curve_points: usize,
    /// Keep every `k`-th state as a trajectory row.
    pub record_every: Option<usize>,
}

impl MonitorSpec {
    /// Defaults relative to the state bound (1 when unbounded).
    pub fn for_config(cfg: &DynamicsConfig) -> Self {
        let a = cfg.bound().unwrap_or(1.0);
        MonitorSpec {
            touch_eps: 1e-6 * a,
            cluster_tol: 1e-6 * a,
            extreme_floor: false,
            survivor: false,
            survivor_threshold: 1e3,
            reference: None,
            curve_points: 10_000,
            record_every: None,
        }
    }
}

/// Incremental per-run observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Monitor {
    pub events: usize,
    pub bound: Option<f64>,
    /// Entries into `x_i ≤ −A + ε` per node (a start inside counts once).
    pub lower_touches: Vec<u64>,
    /// Entries into `x_i ≥ A − ε` per node.
    pub upper_touches: Vec<u64>,
    /// Current boundary label per node: −1, +1, or 0 when off the boundary.
    pub label: Vec<i8>,
    /// Event index since which `label` has held.
    pub label_since: Vec<usize>,
    pub extreme_floor_checked: bool,
    pub extreme_floor_violations: usize,
    /// Per node (opposing) or per unordered pair (repelling, row-major
    /// upper triangle): exceeded the survivor threshold at some time.
    pub survivor_flags: Option<Vec<bool>>,
    #[serde(skip)]
    touch_eps: f64,
    #[serde(skip)]
    cluster_tol: f64,
    #[serde(skip)]
    in_lower: Vec<bool>,
    #[serde(skip)]
    in_upper: Vec<bool>,
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    let (i, j) = (a.min(b), a.max(b));
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl Monitor {
    fn start(x0: &[f64], bound: Option<f64>, spec: &MonitorSpec, survivor: Option<Rule>) -> Self {
        let n = x0.len();
        let survivor_flags = survivor.map(|r| match r {
            Rule::Opposing => vec![false; n],
            Rule::Repelling => vec![false; n * (n - 1) / 2],
        });
        let mut m = Monitor {
            events: 0,
            bound,
            lower_touches: vec![0; n],
            upper_touches: vec![0; n],
            label: vec![0; n],
            label_since: vec![0; n],
            extreme_floor_checked: false,
            extreme_floor_violations: 0,
            survivor_flags,
            touch_eps: spec.touch_eps,
            cluster_tol: spec.cluster_tol,
            in_lower: vec![false; n],
            in_upper: vec![false; n],
        };
        for (i, &v) in x0.iter().enumerate() {
            m.observe_node(0, i, v);
        }
        m
    }

    /// Replays recorded states (one row per event) through the monitor.
    pub fn from_states(states: &[Vec<f64>], bound: Option<f64>, spec: &MonitorSpec) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidParameter("no states to monitor".into()))?;
        let mut m = Monitor::start(first, bound, spec, None);
        for (t, row) in states.iter().enumerate().skip(1) {
            for (i, &v) in row.iter().enumerate() {
                m.observe_node(t, i, v);
            }
            m.events = t;
        }
        Ok(m)
    }

    fn observe_node(&mut self, t: usize, i: usize, v: f64) {
        let Some(a) = self.bound else { return };
        let lower = v <= -a + self.touch_eps;
        let upper = v >= a - self.touch_eps;
        if lower && !self.in_lower[i] {
            self.lower_touches[i] += 1;
        }
        if upper && !self.in_upper[i] {
            self.upper_touches[i] += 1;
        }
        self.in_lower[i] = lower;
        self.in_upper[i] = upper;
        let label = if v >= a - self.cluster_tol {
            1
        } else if v <= -a + self.cluster_tol {
            -1
        } else {
            0
        };
        if label != self.label[i] || t == 0 {
            self.label[i] = label;
            self.label_since[i] = t;
        }
    }

    fn observe_survivors(&mut self, x: &[f64], nodes: [usize; 2], threshold: f64, rule: Rule) {
        let Some(flags) = self.survivor_flags.as_mut() else { return };
        let n = x.len();
        for s in nodes {
            match rule {
                Rule::Opposing => {
                    if x[s].abs() > threshold {
                        flags[s] = true;
                    }
                }
                Rule::Repelling => {
                    for m in (0..n).filter(|&m| m != s) {
                        if (x[s] - x[m]).abs() > threshold {
                            flags[pair_index(n, s, m)] = true;
                        }
                    }
                }
            }
        }
    }

    /// Every node (or pair) crossed the survivor threshold.
    pub fn no_survivors(&self) -> Option<bool> {
        self.survivor_flags.as_ref().map(|f| f.iter().all(|&b| b))
    }
}

/// Result of one gossip run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GossipRun {
    pub x0: Vec<f64>,
    /// Terminal state divided by `2^log2_scale`.
    pub terminal_scaled: Vec<f64>,
    pub log2_scale: i32,
    pub monitor: Monitor,
    /// Event times of `error_curve`.
    pub curve_times: Vec<usize>,
    /// `‖x(t) − reference‖²` at `curve_times`.
    pub error_curve: Option<Vec<f64>>,
    /// Recorded rows in true scale (may overflow to ±∞ on divergent runs).
    pub trajectory: Option<Trajectory>,
}

impl GossipRun {
    /// Terminal state in true scale; entries may overflow to ±∞.
    pub fn terminal(&self) -> Vec<f64> {
        let f = 2f64.powi(self.log2_scale);
        self.terminal_scaled.iter().map(|v| v * f).collect()
    }

    /// `log2 max_i |x_i|` at the end (−∞ for the zero state).
    pub fn terminal_log2_h(&self) -> f64 {
        norm_inf(&self.terminal_scaled).log2() + self.log2_scale as f64
    }

    /// `log2 (max_i x_i − min_i x_i)` at the end.
    pub fn terminal_log2_spread(&self) -> f64 {
        spread(&self.terminal_scaled).log2() + self.log2_scale as f64
    }
}

fn curve_stride(horizon: usize, points: usize) -> usize {
    horizon.div_ceil(points.max(1)).max(1)
}

/// Runs `horizon` events from `x0`, advancing the process's stream.
pub fn run_trajectory(
    p: &mut GossipProcess,
    cfg: &DynamicsConfig,
    x0: &[f64],
    horizon: usize,
    spec: &MonitorSpec,
) -> Result<GossipRun> {
    let n = p.graph.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    if let Some(r) = &spec.reference {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
    }
    let floor_c = if spec.extreme_floor {
        if cfg.rule() != Rule::Opposing {
            return Err(Error::ParameterRangeViolation(
                "the lower bound concerns the opposing rule".into(),
            ));
        }
        Some(extreme_floor_constant(cfg.alpha(), cfg.beta())?)
    } else {
        None
    };
    let unbounded = cfg.bound().is_none();
    let survivor_rule = (spec.survivor && unbounded).then_some(cfg.rule());
    let mut monitor = Monitor::start(x0, cfg.bound(), spec, survivor_rule);
    monitor.extreme_floor_checked = floor_c.is_some();

    let big = 2f64.powi(RESCALE_EXP);
    let shrink = 2f64.powi(-RESCALE_EXP);
    let mut x = x0.to_vec();
    let mut scale: i32 = 0;
    let mut survivor_thr = spec.survivor_threshold;
    let mut h_prev = norm_inf(&x);

    let stride = curve_stride(horizon, spec.curve_points);
    let mut curve_times = Vec::new();
    let mut curve = spec.reference.as_ref().map(|_| Vec::new());
    let sq_error = |x: &[f64], scale: i32, r: &[f64]| -> f64 {
        let f = 2f64.powi(scale);
        x.iter().zip(r).map(|(a, b)| (a * f - b).powi(2)).sum()
    };
    if let (Some(c), Some(r)) = (curve.as_mut(), spec.reference.as_ref()) {
        c.push(sq_error(&x, scale, r));
        curve_times.push(0);
    }
    let mut traj = spec.record_every.map(|_| {
        let mut t = Trajectory::empty(Clock::Discrete);
        t.push_row(0.0, &x);
        t
    });

    for t in 1..=horizon {
        let edge = p.sample_edge();
        gossip_step(&mut x, &edge, cfg);
        let (i, j) = (edge.from, edge.to);
        if unbounded && (x[i].abs() > big || x[j].abs() > big) {
            x.iter_mut().for_each(|v| *v *= shrink);
            h_prev *= shrink;
            scale += RESCALE_EXP;
            survivor_thr = spec.survivor_threshold * 2f64.powi(-scale);
        }
        if let Some(c) = floor_c {
            let h = norm_inf(&x);
            let slack = 1e-12 * h_prev.max(2f64.powi(-scale));
            if h < c * h_prev - slack {
                monitor.extreme_floor_violations += 1;
            }
            h_prev = h;
        }
        monitor.observe_node(t, i, x[i]);
        monitor.observe_node(t, j, x[j]);
        if let Some(rule) = survivor_rule {
            monitor.observe_survivors(&x, [i, j], survivor_thr, rule);
        }
        monitor.events = t;
        if let (Some(c), Some(r)) = (curve.as_mut(), spec.reference.as_ref()) {
            if t % stride == 0 || t == horizon {
                c.push(sq_error(&x, scale, r));
                curve_times.push(t);
            }
        }
        if let (Some(tr), Some(k)) = (traj.as_mut(), spec.record_every) {
            if t % k.max(1) == 0 || t == horizon {
                let f = 2f64.powi(scale);
                let row: Vec<f64> = x.iter().map(|v| v * f).collect();
                tr.push_row(t as f64, &row);
            }
        }
    }
    if let Some(tr) = traj.as_mut() {
        tr.steps = horizon;
        tr.termination = Termination::Horizon;
    }
    Ok(GossipRun {
        x0: x0.to_vec(),
        terminal_scaled: x,
        log2_scale: scale,
        monitor,
        curve_times,
        error_curve: curve,
        trajectory: traj,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Outcome {
    BipartiteConsensus,
    ZeroConsensus,
    AverageConsensus,
    BoundaryClustering,
    Oscillating,
    Diverging,
    Undecided,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::BipartiteConsensus => "BipartiteConsensus",
            Outcome::ZeroConsensus => "ZeroConsensus",
            Outcome::AverageConsensus => "AverageConsensus",
            Outcome::BoundaryClustering => "BoundaryClustering",
            Outcome::Oscillating => "Oscillating",
            Outcome::Diverging => "Diverging",
            Outcome::Undecided => "Undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub outcome: Outcome,
    /// `±1` per group for boundary clustering.
    pub group_labels: Option<Vec<i8>>,
}

/// Everything `classify_outcome` needs besides the run itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyContext {
    pub rule: Rule,
    /// Group index per node, for clustering checks.
    pub groups: Option<Vec<usize>>,
    /// Predicted limit, for consensus classes.
    pub prediction: Option<(LimitKind, Vec<f64>)>,
    pub consensus_tol: f64,
    /// Labels must have held over this final fraction of events.
    pub settle_fraction: f64,
    pub k_touch: u64,
    /// Terminal `h` (opposing) or spread (repelling) beyond this diverges.
    pub divergence_threshold: f64,
}

impl ClassifyContext {
    pub fn new(rule: Rule) -> Self {
        ClassifyContext {
            rule,
            groups: None,
            prediction: None,
            consensus_tol: 1e-3,
            settle_fraction: 0.2,
            k_touch: 2,
            divergence_threshold: 1e6,
        }
    }
}

/// Classification order: boundary clustering, consensus against the
/// prediction, oscillation between the boundaries, divergence, undecided.
pub fn classify_outcome(run: &GossipRun, ctx: &ClassifyContext) -> Result<Classification> {
    classify_parts(
        &run.terminal(),
        run.terminal_log2_h(),
        run.terminal_log2_spread(),
        Some(&run.monitor),
        ctx,
    )
}

/// Classifies a recorded trajectory (one row per event) by replaying it
/// through a fresh monitor.
pub fn classify_trajectory(
    traj: &Trajectory,
    bound: Option<f64>,
    spec: &MonitorSpec,
    ctx: &ClassifyContext,
) -> Result<Classification> {
    let m = Monitor::from_states(&traj.states, bound, spec)?;
    let last = traj.final_state();
    classify_parts(
        last,
        norm_inf(last).log2(),
        spread(last).log2(),
        Some(&m),
        ctx,
    )
}

fn classify_parts(
    terminal: &[f64],
    log2_h: f64,
    log2_spread: f64,
    monitor: Option<&Monitor>,
    ctx: &ClassifyContext,
) -> Result<Classification> {
    let plain = |outcome| Ok(Classification {
        outcome,
        group_labels: None,
    });
    if monitor.is_none() && ctx.groups.is_some() {
        return Err(Error::MonitorsMissing);
    }
    let bounded = monitor.and_then(|m| m.bound).is_some();
    if bounded {
        let m = monitor.ok_or(Error::MonitorsMissing)?;
        if let Some(groups) = &ctx.groups {
            if let Some(labels) = settled_group_labels(m, groups, ctx.settle_fraction) {
                return Ok(Classification {
                    outcome: Outcome::BoundaryClustering,
                    group_labels: Some(labels),
                });
            }
        }
    }
    if let Some((kind, limit)) = &ctx.prediction {
        let dist = terminal
            .iter()
            .zip(limit)
            .fold(0.0f64, |d, (a, b)| d.max((a - b).abs()));
        if dist <= ctx.consensus_tol {
            let outcome = match kind {
                LimitKind::BipartiteConsensus => Some(Outcome::BipartiteConsensus),
                LimitKind::ZeroConsensus => Some(Outcome::ZeroConsensus),
                LimitKind::AverageConsensus | LimitKind::WeightedConsensus => {
                    Some(Outcome::AverageConsensus)
                }
                _ => None,
            };
            if let Some(o) = outcome {
                return plain(o);
            }
        }
    }
    if bounded {
        let m = monitor.ok_or(Error::MonitorsMissing)?;
        let k = ctx.k_touch;
        if m
            .lower_touches
            .iter()
            .zip(&m.upper_touches)
            .all(|(&lo, &hi)| lo >= k && hi >= k)
        {
            return plain(Outcome::Oscillating);
        }
    }
    let magnitude = match ctx.rule {
        Rule::Opposing => log2_h,
        Rule::Repelling => log2_spread,
    };
    if magnitude > ctx.divergence_threshold.log2() {
        return plain(Outcome::Diverging);
    }
    plain(Outcome::Undecided)
}

fn settled_group_labels(m: &Monitor, groups: &[usize], settle_fraction: f64) -> Option<Vec<i8>> {
    let settle_start = ((m.events as f64) * (1.0 - settle_fraction)).floor() as usize;
    let count = groups.iter().copied().max()? + 1;
    let mut labels = vec![0i8; count];
    for (i, &g) in groups.iter().enumerate() {
        let l = m.label[i];
        if l == 0 || m.label_since[i] > settle_start {
            return None;
        }
        if labels[g] == 0 {
            labels[g] = l;
        } else if labels[g] != l {
            return None;
        }
    }
    Some(labels)
}

/// Limit the gossip analysis predicts for `(g, cfg)` from `x0`, if any.
/// Bounded (clipped) dynamics have no linear limit and get `None`.
pub fn gossip_prediction(
    g: &SignedGraph,
    cfg: &DynamicsConfig,
    mu: &[f64],
    x0: &[f64],
) -> Result<Option<(LimitKind, Vec<f64>)>> {
    if cfg.bound().is_some() {
        return Ok(None);
    }
    let n = g.n();
    let mean = x0.iter().sum::<f64>() / n as f64;
    if !g.has_negative_edges() {
        return Ok(Some((LimitKind::AverageConsensus, vec![mean; n])));
    }
    match cfg.rule() {
        Rule::Opposing => {
            if cfg.beta() >= 1.0 {
                return Ok(None);
            }
            let bal = g.check_structural_balance()?;
            Ok(Some(match bal.gauge {
                Some(k) => {
                    let c = k.iter().zip(x0).map(|(a, b)| a * b).sum::<f64>() / n as f64;
                    (
                        LimitKind::BipartiteConsensus,
                        k.iter().map(|ki| ki * c).collect(),
                    )
                }
                None => (LimitKind::ZeroConsensus, vec![0.0; n]),
            }))
        }
        Rule::Repelling => {
            let star = critical_beta_gossip(g, cfg.alpha(), mu)?;
            Ok((cfg.beta() < star).then(|| (LimitKind::AverageConsensus, vec![mean; n])))
        }
    }
}

/// Initial states of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum X0Spec {
    Fixed(Vec<f64>),
    /// Independent uniform entries in `[lo, hi)`; run `r` draws from seed
    /// `seed + r`.
    Uniform { lo: f64, hi: f64, seed: u64 },
}

impl X0Spec {
    pub fn for_run(&self, n: usize, run: usize) -> Vec<f64> {
        match self {
            X0Spec::Fixed(v) => v.clone(),
            X0Spec::Uniform { lo, hi, seed } => {
                let mut rng = rng_for_run(*seed, run);
                (0..n).map(|_| uniform(&mut rng, *lo, *hi)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloOptions {
    pub monitor: MonitorSpec,
    /// Track `E‖x(t) − limit‖²` against each run's predicted limit.
    pub error_curve: bool,
    pub consensus_tol: f64,
    pub settle_fraction: f64,
    pub k_touch: u64,
    pub divergence_threshold: f64,
    /// Keep the per-run records (with trajectories when recorded).
    pub keep_runs: bool,
}

impl MonteCarloOptions {
    pub fn for_config(cfg: &DynamicsConfig) -> Self {
        let ctx = ClassifyContext::new(cfg.rule());
        MonteCarloOptions {
            monitor: MonitorSpec::for_config(cfg),
            error_curve: true,
            consensus_tol: ctx.consensus_tol,
            settle_fraction: ctx.settle_fraction,
            k_touch: ctx.k_touch,
            divergence_threshold: ctx.divergence_threshold,
            keep_runs: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCurve {
    pub times: Vec<usize>,
    /// Mean over runs of `‖x(t) − limit‖²`.
    pub mean_square_error: Vec<f64>,
}

impl ErrorCurve {
    /// At most `points` samples, evenly spread, always keeping both ends.
    pub fn downsampled(&self, points: usize) -> ErrorCurve {
        let len = self.times.len();
        if len <= points || points < 2 {
            return self.clone();
        }
        let idx: Vec<usize> = (0..points)
            .map(|m| ((m as f64) * (len - 1) as f64 / (points - 1) as f64).round() as usize)
            .collect();
        ErrorCurve {
            times: idx.iter().map(|&k| self.times[k]).collect(),
            mean_square_error: idx.iter().map(|&k| self.mean_square_error[k]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivorStats {
    pub diverging_runs: usize,
    /// Diverging runs in which every node (pair) crossed the threshold.
    pub no_survivor_runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub graph_nodes: usize,
    pub rule: Rule,
    pub alpha: f64,
    pub beta: f64,
    pub bound: Option<f64>,
    pub seed: u64,
    pub runs: usize,
    pub horizon: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub outcomes: Vec<Outcome>,
    pub group_labels: Vec<Option<Vec<i8>>>,
    pub terminal_states: Vec<Vec<f64>>,
    pub terminal_log2_scale: Vec<i32>,
    /// Downsampled to at most 1000 points.
    pub mse_curve: Option<ErrorCurve>,
    pub lower_touches: Option<Vec<u64>>,
    pub upper_touches: Option<Vec<u64>>,
    pub extreme_floor_violations: Option<usize>,
    pub survivors: Option<SurvivorStats>,
}

impl MonteCarloSummary {
    pub fn count(&self, o: Outcome) -> usize {
        self.verdicts.get(o.name()).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialises")
    }
}

#[derive(Debug, Clone)]
pub struct MonteCarloResult {
    pub summary: MonteCarloSummary,
    /// Full-resolution ensemble error curve.
    pub mse_curve: Option<ErrorCurve>,
    /// Present when `keep_runs` was set.
    pub runs: Vec<GossipRun>,
}

/// Independent runs `0..runs`, run `r` on stream `seed + r`. Runs execute in
/// parallel; every aggregate is reduced in run order afterwards, so the
/// result does not depend on scheduling.
pub fn monte_carlo(
    p: &GossipProcess,
    cfg: &DynamicsConfig,
    x0: &X0Spec,
    runs: usize,
    horizon: usize,
    opts: &MonteCarloOptions,
) -> Result<MonteCarloResult> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    let g = p.graph();
    let n = g.n();
    let groups = match g.check_weak_balance() {
        Ok(r) => r.labels(n),
        Err(_) => None,
    };

    let per_run: Vec<Result<(GossipRun, Classification)>> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut proc_r = p.for_run(r);
            let start = x0.for_run(n, r);
            let prediction = gossip_prediction(g, cfg, p.mu(), &start)?;
            let mut spec = opts.monitor.clone();
            spec.reference = if opts.error_curve {
                prediction.as_ref().map(|(_, l)| l.clone())
            } else {
                None
            };
            let run = run_trajectory(&mut proc_r, cfg, &start, horizon, &spec)?;
            let ctx = ClassifyContext {
                rule: cfg.rule(),
                groups: groups.clone(),
                prediction,
                consensus_tol: opts.consensus_tol,
                settle_fraction: opts.settle_fraction,
                k_touch: opts.k_touch,
                divergence_threshold: opts.divergence_threshold,
            };
            let class = classify_outcome(&run, &ctx)?;
            Ok((run, class))
        })
        .collect();

    let mut verdicts = BTreeMap::new();
    let mut outcomes = Vec::with_capacity(runs);
    let mut group_labels = Vec::with_capacity(runs);
    let mut terminal_states = Vec::with_capacity(runs);
    let mut terminal_log2_scale = Vec::with_capacity(runs);
    let mut curve_sum: Option<(Vec<usize>, Vec<f64>)> = None;
    let mut curve_runs = 0usize;
    let mut curves_consistent = true;
    let bounded = cfg.bound().is_some();
    let mut lower = bounded.then(|| vec![0u64; n]);
    let mut upper = bounded.then(|| vec![0u64; n]);
    let mut floor_violations = opts.monitor.extreme_floor.then_some(0usize);
    let mut survivors = (opts.monitor.survivor && !bounded).then_some(SurvivorStats {
        diverging_runs: 0,
        no_survivor_runs: 0,
    });
    let mut kept = Vec::new();

    for item in per_run {
        let (run, class) = item?;
        *verdicts.entry(class.outcome.name().to_string()).or_insert(0) += 1;
        outcomes.push(class.outcome);
        group_labels.push(class.group_labels);
        terminal_states.push(run.terminal_scaled.clone());
        terminal_log2_scale.push(run.log2_scale);
        if let Some(c) = &run.error_curve {
            match curve_sum.as_mut() {
                None => curve_sum = Some((run.curve_times.clone(), c.clone())),
                Some((times, sum)) if *times == run.curve_times => {
                    sum.iter_mut().zip(c).for_each(|(s, v)| *s += v);
                }
                Some(_) => curves_consistent = false,
            }
            curve_runs += 1;
        }
        if let (Some(lo), Some(hi)) = (lower.as_mut(), upper.as_mut()) {
            lo.iter_mut().zip(&run.monitor.lower_touches).for_each(|(a, b)| *a += b);
            hi.iter_mut().zip(&run.monitor.upper_touches).for_each(|(a, b)| *a += b);
        }
        if let Some(l) = floor_violations.as_mut() {
            *l += run.monitor.extreme_floor_violations;
        }
        if let Some(s) = survivors.as_mut() {
            if class.outcome == Outcome::Diverging {
                s.diverging_runs += 1;
                if run.monitor.no_survivors() == Some(true) {
                    s.no_survivor_runs += 1;
                }
            }
        }
        if opts.keep_runs {
            kept.push(run);
        }
    }

    // the mean is only meaningful when every run contributed
    let mse_curve = match curve_sum {
        Some((times, sum)) if curves_consistent && curve_runs == runs => Some(ErrorCurve {
            times,
            mean_square_error: sum.iter().map(|s| s / runs as f64).collect(),
        }),
        _ => None,
    };
    let summary = MonteCarloSummary {
        graph_nodes: n,
        rule: cfg.rule(),
        alpha: cfg.alpha(),
        beta: cfg.beta(),
        bound: cfg.bound(),
        seed: p.seed(),
        runs,
        horizon,
        verdicts,
        outcomes,
        group_labels,
        terminal_states,
        terminal_log2_scale,
        mse_curve: mse_curve.as_ref().map(|c| c.downsampled(1000)),
        lower_touches: lower,
        upper_touches: upper,
        extreme_floor_violations: floor_violations,
        survivors,
    };
    Ok(MonteCarloResult {
        summary,
        mse_curve,
        runs: kept,
    })
}

/// Sample mean of the squared event matrices `W_t²` (or `K·W_t²·K`) over
/// `samples` draws, with per-entry standard errors.
#[derive(Debug, Clone)]
pub struct EmpiricalMoment {
    pub mean: Matrix,
    pub std_error: Matrix,
    pub samples: usize,
}

pub fn empirical_second_moment(
    p: &mut GossipProcess,
    cfg: &DynamicsConfig,
    samples: usize,
    gauge: bool,
) -> Result<EmpiricalMoment> {
    if samples < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "at least 10000 samples are required, got {samples}"
        )));
    }
    let g = p.graph().clone();
    let n = g.n();
    let k = if gauge {
        let bal = g.check_structural_balance()?;
        Some(bal.gauge.ok_or(Error::GaugeRequestedOnUnbalancedGraph)?)
    } else {
        None
    };
    let mut counts = vec![0usize; g.edges().len()];
    for _ in 0..samples {
        counts[p.sample_pair()] += 1;
    }
    let mut mean = Matrix::zeros(n, n);
    let mut second = Matrix::zeros(n, n);
    for (e, &c) in g.edges().iter().zip(&counts) {
        if c == 0 {
            continue;
        }
        let w = step_matrix(n, e, cfg);
        let mut sq = w.matmul(&w);
        if let Some(k) = &k {
            sq = sq.conjugate_signs(k);
        }
        let f = c as f64 / samples as f64;
        mean = mean.add_scaled(f, &sq);
        let squares = Matrix::from_fn(n, n, |i, j| sq[(i, j)] * sq[(i, j)]);
        second = second.add_scaled(f, &squares);
    }
    let std_error = Matrix::from_fn(n, n, |i, j| {
        let var = (second[(i, j)] - mean[(i, j)].powi(2)).max(0.0);
        (var / samples as f64).sqrt()
    });
    Ok(EmpiricalMoment {
        mean,
        std_error,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Sign::*;
    use crate::laplacian::expected_second_moment;

    #[test]
    fn step_examples() {
        let pos = SignedEdge::positive(0, 1);
        let neg = SignedEdge::negative(0, 1);
        let mut x = vec![1.0, 0.0];
        gossip_step(&mut x, &pos, &DynamicsConfig::opposing(0.2, 0.2).unwrap());
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 0.2).abs() < 1e-15);

        let mut x = vec![1.0, 0.5];
        gossip_step(&mut x, &neg, &DynamicsConfig::opposing(0.2, 0.2).unwrap());
        assert!((x[0] - 0.7).abs() < 1e-15 && (x[1] - 0.2).abs() < 1e-15);

        let cfg = DynamicsConfig::repelling(0.3, 3.0).unwrap().with_bound(1.0).unwrap();
        let mut x = vec![0.5, 0.4];
        gossip_step(&mut x, &neg, &cfg);
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 0.1).abs() < 1e-15);
        let mut x = vec![0.9, 0.1];
        gossip_step(&mut x, &neg, &cfg);
        assert_eq!(x, vec![1.0, -1.0]);
    }

    #[test]
    fn step_matrix_matches_step() {
        let cfg = DynamicsConfig::repelling(0.3, 0.7).unwrap();
        let e = SignedEdge::negative(1, 3);
        let x = vec![0.3, -1.2, 2.0, 0.25];
        let mut y = x.clone();
        gossip_step(&mut y, &e, &cfg);
        let z = step_matrix(4, &e, &cfg).mul_vec(&x);
        for (a, b) in y.iter().zip(&z) {
            assert!((a - b).abs() < 1e-15);
        }
        // other coordinates untouched bit-exactly
        assert_eq!((y[0], y[2]), (x[0], x[2]));
    }

    #[test]
    fn extreme_floor_constant_values() {
        assert_eq!(extreme_floor_constant(0.3, 3.0).unwrap(), 0.4);
        assert_eq!(extreme_floor_constant(0.9, 3.0).unwrap(), 0.5);
        assert!(matches!(extreme_floor_constant(0.5, 3.0), Err(Error::ParameterRangeViolation(_))));
        assert!(matches!(extreme_floor_constant(0.3, 2.9), Err(Error::ParameterRangeViolation(_))));
    }

    #[test]
    fn zero_state_stays_zero() {
        let cfg = DynamicsConfig::opposing(0.3, 0.4).unwrap();
        let mut p = GossipProcess::new(fixtures::t1(), 5).unwrap();
        let run = run_trajectory(&mut p, &cfg, &[0.0; 3], 1000, &MonitorSpec::for_config(&cfg)).unwrap();
        assert_eq!(run.terminal(), vec![0.0; 3]);
    }

    #[test]
    fn rescaling_keeps_extreme_floor() {
        let cfg = DynamicsConfig::opposing(0.3, 3.0).unwrap();
        let mut p = GossipProcess::new(fixtures::t2(), 11).unwrap();
        let mut spec = MonitorSpec::for_config(&cfg);
        spec.extreme_floor = true;
        spec.survivor = true;
        let run = run_trajectory(&mut p, &cfg, &[0.3, -0.1, 0.7], 5000, &spec).unwrap();
        assert!(run.log2_scale > 0, "run should have needed rescaling");
        assert_eq!(run.monitor.extreme_floor_violations, 0);
        assert!(run.terminal_log2_h() > 1000.0);
        assert_eq!(run.monitor.no_survivors(), Some(true));
    }

    #[test]
    fn sampling_frequencies() {
        let g = fixtures::path(&[Positive, Negative]);
        let mut p = GossipProcess::new(g, 3).unwrap();
        let draws = 1_000_000;
        let mut hits = [0usize; 2];
        for _ in 0..draws {
            hits[p.sample_pair()] += 1;
        }
        let sd = (0.25f64 / draws as f64).sqrt();
        for h in hits {
            assert!((h as f64 / draws as f64 - 0.5).abs() < 3.0 * sd + 1e-12);
        }
    }

    #[test]
    fn clustering_classification_of_a_recorded_path() {
        let cfg = DynamicsConfig::repelling(0.3, 10.0).unwrap().with_bound(1.0).unwrap();
        let spec = MonitorSpec::for_config(&cfg);
        let mut traj = Trajectory::empty(Clock::Discrete);
        for t in 0..10 {
            let row = if t < 3 {
                vec![0.2, -0.3, 0.5, 0.9]
            } else {
                vec![-1.0, -1.0, 1.0, 1.0]
            };
            traj.push_row(t as f64, &row);
        }
        let mut ctx = ClassifyContext::new(Rule::Repelling);
        ctx.groups = Some(vec![0, 0, 1, 1]);
        let c = classify_trajectory(&traj, cfg.bound(), &spec, &ctx).unwrap();
        assert_eq!(c.outcome, Outcome::BoundaryClustering);
        assert_eq!(c.group_labels, Some(vec![-1, 1]));
    }

    #[test]
    fn oscillation_classification_of_a_recorded_path() {
        let spec = MonitorSpec::for_config(&DynamicsConfig::repelling(0.7, 10.0).unwrap());
        let mut traj = Trajectory::empty(Clock::Discrete);
        for t in 0..8 {
            let v = if t % 2 == 0 { 1.0 } else { -1.0 };
            traj.push_row(t as f64, &[v, -v]);
        }
        let mut ctx = ClassifyContext::new(Rule::Repelling);
        ctx.groups = Some(vec![0, 1]);
        let c = classify_trajectory(&traj, Some(1.0), &spec, &ctx).unwrap();
        assert_eq!(c.outcome, Outcome::Oscillating);
    }

    #[test]
    fn constant_bipartite_trajectory_is_recognised() {
        let spec = MonitorSpec::for_config(&DynamicsConfig::opposing(0.2, 0.2).unwrap());
        let mut traj = Trajectory::empty(Clock::Discrete);
        let x = [1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0];
        traj.push_row(0.0, &x);
        traj.push_row(1.0, &x);
        let mut ctx = ClassifyContext::new(Rule::Opposing);
        ctx.prediction = Some((LimitKind::BipartiteConsensus, x.to_vec()));
        let c = classify_trajectory(&traj, None, &spec, &ctx).unwrap();
        assert_eq!(c.outcome, Outcome::BipartiteConsensus);
    }

    #[test]
    fn missing_monitors_are_reported() {
        let mut ctx = ClassifyContext::new(Rule::Repelling);
        let fake = Monitor::start(&[0.0, 1.0], Some(1.0), &MonitorSpec::for_config(
            &DynamicsConfig::repelling(0.3, 1.0).unwrap(),
        ), None);
        assert!(classify_parts(&[0.0, 1.0], 0.0, 0.0, Some(&fake), &ctx).is_ok());
        assert_eq!(
            classify_parts(&[0.0, 1.0], 0.0, 0.0, None, &ctx).unwrap().outcome,
            Outcome::Undecided
        );
        ctx.groups = Some(vec![0, 1]);
        assert_eq!(
            classify_parts(&[0.0, 1.0], 0.0, 0.0, None, &ctx),
            Err(Error::MonitorsMissing)
        );
    }

    #[test]
    fn empirical_moment_close_to_formula() {
        let g = fixtures::t2();
        let cfg = DynamicsConfig::opposing(0.2, 0.2).unwrap();
        let mut p = GossipProcess::new(g.clone(), 9).unwrap();
        let emp = empirical_second_moment(&mut p, &cfg, 100_000, true).unwrap();
        let exact = expected_second_moment(&g, &cfg, p.mu(), true).unwrap();
        assert!((&emp.mean - &exact).max_abs() < 0.01);
        let mut p1 = GossipProcess::new(fixtures::t1(), 9).unwrap();
        assert!(matches!(
            empirical_second_moment(&mut p1, &cfg, 100_000, true),
            Err(Error::GaugeRequestedOnUnbalancedGraph)
        ));
    }

    #[test]
    fn pair_indexing_is_dense() {
        let n = 5;
        let mut seen = vec![false; n * (n - 1) / 2];
        for a in 0..n {
            for b in (a + 1)..n {
                let k = pair_index(n, a, b);
                assert!(!seen[k]);
                seen[k] = true;
                assert_eq!(k, pair_index(n, b, a));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
