//! Deterministic dynamics: fixed-graph iteration, closed-form limits,
//! switching graph sequences and continuous-time flows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::laplacian::{build_matrices, flow_generator, update_matrix, DynamicsConfig, Rule};
use crate::matrix::{norm2, norm_inf, spread, Matrix};
use crate::report::{fmt_data, KvBlock};
use crate::spectral::{
    self, critical_beta_deterministic, radius_without_consensus, stationary_left_vector,
    symmetric_eigen,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clock {
    Discrete,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    /// Ran the full horizon.
    Horizon,
    /// Successive states stopped moving.
    Converged,
    /// Norm or spread left the numeric guard band.
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub clock: Clock,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `max_i |x_i|` per recorded state.
    pub h: Vec<f64>,
    pub spread: Vec<f64>,
    /// Euclidean norm per recorded state.
    pub norm: Vec<f64>,
    pub termination: Termination,
    /// Number of update steps actually applied.
    pub steps: usize,
}

impl Trajectory {
    /// Trajectory with no rows yet.
    pub fn empty(clock: Clock) -> Self {
        Trajectory {
            clock,
            times: Vec::new(),
            states: Vec::new(),
            h: Vec::new(),
            spread: Vec::new(),
            norm: Vec::new(),
            termination: Termination::Horizon,
            steps: 0,
        }
    }

    /// Appends a row and its derived columns.
    pub fn push_row(&mut self, t: f64, x: &[f64]) {
        self.times.push(t);
        self.states.push(x.to_vec());
        self.h.push(norm_inf(x));
        self.spread.push(spread(x));
        self.norm.push(norm2(x));
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectories hold the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectories hold the initial state")
    }

    /// CSV with header `t,x1,...,xn,h,spread,norm`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, |s| s.len());
        let mut out = String::from("t");
        for i in 1..=n {
            out.push_str(&format!(",x{i}"));
        }
        out.push_str(",h,spread,norm\n");
        for k in 0..self.len() {
            let mut row = vec![fmt_data(self.times[k])];
            row.extend(self.states[k].iter().map(|&v| fmt_data(v)));
            row.push(fmt_data(self.h[k]));
            row.push(fmt_data(self.spread[k]));
            row.push(fmt_data(self.norm[k]));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Record every `record_every`-th state (the first and last always are).
    pub record_every: usize,
    /// Converged once `‖x(t+1) − x(t)‖∞` stays below this ...
    pub stop_tol: f64,
    /// ... for this many consecutive steps. Zero disables early stopping.
    pub stop_window: usize,
    /// Diverged once the norm or the spread exceeds this.
    pub divergence_threshold: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            record_every: 1,
            stop_tol: 1e-14,
            stop_window: 10,
            divergence_threshold: 1e9,
        }
    }
}

fn check_dim(n: usize, x0: &[f64]) -> Result<()> {
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    Ok(())
}

/// Iterates `x(t+1) = U x(t)` with `U` the update matrix of `(g, cfg)` for at
/// most `steps` steps.
pub fn simulate(g: &SignedGraph, cfg: &DynamicsConfig, x0: &[f64], steps: usize) -> Result<Trajectory> {
    simulate_with(g, cfg, x0, steps, &SimOptions::default())
}

pub fn simulate_with(
    g: &SignedGraph,
    cfg: &DynamicsConfig,
    x0: &[f64],
    steps: usize,
    opts: &SimOptions,
) -> Result<Trajectory> {
    check_dim(g.n(), x0)?;
    let u = update_matrix(g, cfg);
    iterate(|_| &u, x0, steps, opts)
}

fn iterate<'a>(
    mut matrix_at: impl FnMut(usize) -> &'a Matrix,
    x0: &[f64],
    steps: usize,
    opts: &SimOptions,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let stride = opts.record_every.max(1);
    let mut traj = Trajectory::empty(Clock::Discrete);
    let mut x = x0.to_vec();
    let mut next = vec![0.0; x.len()];
    traj.push_row(0.0, &x);
    let mut quiet = 0;
    for t in 1..=steps {
        matrix_at(t - 1).mul_vec_into(&x, &mut next);
        let delta = x
            .iter()
            .zip(&next)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        std::mem::swap(&mut x, &mut next);
        traj.steps = t;
        let diverged = !(norm2(&x) <= opts.divergence_threshold)
            || !(spread(&x) <= opts.divergence_threshold);
        quiet = if delta < opts.stop_tol { quiet + 1 } else { 0 };
        let converged = opts.stop_window > 0 && quiet >= opts.stop_window;
        if diverged || converged || t == steps || t % stride == 0 {
            traj.push_row(t as f64, &x);
        }
        if diverged {
            traj.termination = Termination::Diverged;
            break;
        }
        if converged {
            traj.termination = Termination::Converged;
            break;
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitKind {
    BipartiteConsensus,
    ZeroConsensus,
    AverageConsensus,
    WeightedConsensus,
    Divergent,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitPrediction {
    pub kind: LimitKind,
    pub limit: Option<Vec<f64>>,
    /// `w` (balanced opposing) or `q(β)` (repelling); uniform when undirected.
    pub left_vector: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

impl LimitPrediction {
    fn unknown(note: impl Into<String>) -> Self {
        LimitPrediction {
            kind: LimitKind::Unknown,
            limit: None,
            left_vector: None,
            notes: vec![note.into()],
        }
    }

    fn with(kind: LimitKind, limit: Vec<f64>, left: Vec<f64>, notes: Vec<String>) -> Self {
        LimitPrediction {
            kind,
            limit: Some(limit),
            left_vector: Some(left),
            notes,
        }
    }

    pub fn to_kv(&self) -> KvBlock {
        let list = |v: &[f64]| v.iter().map(|&x| fmt_data(x)).collect::<Vec<_>>().join(",");
        let mut b = KvBlock::new();
        b.push("kind", format!("{:?}", self.kind));
        if let Some(l) = &self.limit {
            b.push("limit", list(l));
        }
        if let Some(w) = &self.left_vector {
            b.push("left_vector", list(w));
        }
        for n in &self.notes {
            b.push("note", n);
        }
        b
    }
}

/// Largest `α·deg⁺_i + β·deg⁻_i` over nodes (weighted in-degrees).
fn max_row_load(g: &SignedGraph, alpha: f64, beta: f64) -> f64 {
    let b = build_matrices(g);
    (0..g.n())
        .map(|i| alpha * b.d_plus[(i, i)] + beta * b.d_minus[(i, i)])
        .fold(0.0, f64::max)
}

/// Closed-form limit of the deterministic dynamics when a convergence or
/// divergence statement applies, `Unknown` with a reason otherwise.
pub fn predict_limit(g: &SignedGraph, cfg: &DynamicsConfig, x0: &[f64]) -> Result<LimitPrediction> {
    check_dim(g.n(), x0)?;
    let d = g.diagnostics();
    let connected = d.strongly_connected.unwrap_or(d.connected);
    match cfg.rule() {
        Rule::Opposing => {
            if !connected {
                return Ok(LimitPrediction::unknown(
                    "graph is not (strongly) connected",
                ));
            }
            predict_opposing(g, cfg, x0)
        }
        Rule::Repelling => predict_repelling(g, cfg, x0),
    }
}

fn predict_opposing(g: &SignedGraph, cfg: &DynamicsConfig, x0: &[f64]) -> Result<LimitPrediction> {
    let n = g.n();
    let mut notes = Vec::new();
    let load = max_row_load(g, cfg.alpha(), cfg.beta());
    if load >= 1.0 {
        // outside the stated step-size range; accept only if the spectrum
        // still guarantees convergence
        match spectral::convergence_rate(g, cfg) {
            Ok(rate) => notes.push(format!(
                "alpha*deg+ + beta*deg- = {load} exceeds the stated range; \
                 accepted because the asymptotic rate is {rate}"
            )),
            Err(_) => {
                return Ok(LimitPrediction::unknown(format!(
                    "alpha*deg+ + beta*deg- = {load} is not below 1 and the \
                     spectrum does not guarantee convergence"
                )))
            }
        }
    }
    let w_matrix = update_matrix(g, cfg);
    if !g.has_negative_edges() {
        notes.push("no negative edges: plain consensus dynamics".into());
        return consensus_of(&w_matrix, g.is_directed(), x0, notes);
    }
    let bal = g.check_structural_balance()?;
    match bal.gauge {
        Some(k) => {
            let kwk = w_matrix.conjugate_signs(&k);
            let w = if g.is_directed() {
                stationary_left_vector(&kwk)?
            } else {
                vec![1.0 / n as f64; n]
            };
            let c: f64 = (0..n).map(|j| w[j] * k[j] * x0[j]).sum();
            let limit = k.iter().map(|ki| ki * c).collect();
            Ok(LimitPrediction::with(LimitKind::BipartiteConsensus, limit, w, notes))
        }
        None => Ok(LimitPrediction {
            kind: LimitKind::ZeroConsensus,
            limit: Some(vec![0.0; n]),
            left_vector: None,
            notes,
        }),
    }
}

/// Consensus value `qᵀx0` of a matrix with `U𝟙 = 𝟙` whose other eigenvalues
/// lie inside the unit disc.
fn consensus_of(
    u: &Matrix,
    directed: bool,
    x0: &[f64],
    notes: Vec<String>,
) -> Result<LimitPrediction> {
    let n = x0.len();
    let rest = radius_without_consensus(u)?;
    if rest >= 1.0 {
        let mut p = LimitPrediction::unknown(format!(
            "eigenvalues other than 1 reach modulus {rest}"
        ));
        p.notes.extend(notes);
        return Ok(p);
    }
    if directed {
        let q = stationary_left_vector(u)?;
        let c: f64 = q.iter().zip(x0).map(|(a, b)| a * b).sum();
        Ok(LimitPrediction::with(LimitKind::WeightedConsensus, vec![c; n], q, notes))
    } else {
        let c = x0.iter().sum::<f64>() / n as f64;
        Ok(LimitPrediction::with(
            LimitKind::AverageConsensus,
            vec![c; n],
            vec![1.0 / n as f64; n],
            notes,
        ))
    }
}

fn predict_repelling(g: &SignedGraph, cfg: &DynamicsConfig, x0: &[f64]) -> Result<LimitPrediction> {
    let d = g.diagnostics();
    if !d.positive_connected {
        return Ok(LimitPrediction::unknown(
            "positive subgraph is not (strongly) connected",
        ));
    }
    let m = update_matrix(g, cfg);
    if g.is_directed() {
        // the directed β* is only an upper bound, so test this β directly
        return consensus_of(&m, true, x0, vec![
            "directed repelling: consensus certified by the spectrum of M at this beta".into(),
        ]);
    }
    let beta_star = match critical_beta_deterministic(g, cfg.alpha()) {
        Ok(b) => b,
        Err(e) => return Ok(LimitPrediction::unknown(format!("critical beta unavailable: {e}"))),
    };
    let notes = vec![format!("critical beta = {beta_star}")];
    let gap = cfg.beta() - beta_star;
    if gap.abs() <= 1e-9 * beta_star.max(1.0) {
        let mut p = LimitPrediction::unknown("beta is at the critical value");
        p.notes.extend(notes);
        return Ok(p);
    }
    if gap > 0.0 {
        return Ok(LimitPrediction {
            kind: LimitKind::Divergent,
            limit: None,
            left_vector: None,
            notes,
        });
    }
    consensus_of(&m, false, x0, notes)
}

/// Time-varying topology: `graphs[t % len]` when periodic, otherwise the
/// last graph repeats once the list runs out.
#[derive(Debug, Clone)]
pub struct GraphSequence {
    pub graphs: Vec<SignedGraph>,
    pub periodic: bool,
}

impl GraphSequence {
    pub fn new(graphs: Vec<SignedGraph>, periodic: bool) -> Result<Self> {
        let first = graphs
            .first()
            .ok_or_else(|| Error::InvalidParameter("graph sequence is empty".into()))?;
        let (n, directed) = (first.n(), first.is_directed());
        for g in &graphs {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.n(),
                });
            }
            if g.is_directed() != directed {
                return Err(Error::InvalidParameter(
                    "graph sequence mixes directed and undirected graphs".into(),
                ));
            }
        }
        Ok(GraphSequence { graphs, periodic })
    }

    pub fn n(&self) -> usize {
        self.graphs[0].n()
    }

    pub fn index_at(&self, t: usize) -> usize {
        if self.periodic {
            t % self.graphs.len()
        } else {
            t.min(self.graphs.len() - 1)
        }
    }

    pub fn at(&self, t: usize) -> &SignedGraph {
        &self.graphs[self.index_at(t)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchingOutcome {
    pub trajectory: Trajectory,
    /// All `|x_i|` agree within the tolerance at the horizon.
    pub modulus_consensus: bool,
    /// Mean of `|x_i|` at the horizon.
    pub y_star: f64,
    /// `max_i |x_i| − min_i |x_i|` at the horizon.
    pub modulus_spread: f64,
}

/// Runs the time-varying update. Every step must satisfy
/// `α·deg⁺_i(t) + β·deg⁻_i(t) ≤ 1 − δ` at every node.
pub fn simulate_switching(
    seq: &GraphSequence,
    cfg: &DynamicsConfig,
    x0: &[f64],
    steps: usize,
    delta: f64,
    tol: f64,
) -> Result<SwitchingOutcome> {
    check_dim(seq.n(), x0)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    // every distinct graph is met within the first `len` steps
    for t in 0..seq.graphs.len().min(steps) {
        let b = build_matrices(seq.at(t));
        for i in 0..seq.n() {
            let load = cfg.alpha() * b.d_plus[(i, i)] + cfg.beta() * b.d_minus[(i, i)];
            if load > 1.0 - delta {
                return Err(Error::StepConditionViolated {
                    step: t,
                    node: i,
                    delta,
                });
            }
        }
    }
    let mats: Vec<Matrix> = seq.graphs.iter().map(|g| update_matrix(g, cfg)).collect();
    let opts = SimOptions {
        stop_window: 0,
        ..SimOptions::default()
    };
    let trajectory = iterate(|t| &mats[seq.index_at(t)], x0, steps, &opts)?;
    let mods: Vec<f64> = trajectory.final_state().iter().map(|v| v.abs()).collect();
    let modulus_spread = spread(&mods);
    Ok(SwitchingOutcome {
        modulus_consensus: modulus_spread <= tol,
        y_star: mods.iter().sum::<f64>() / mods.len() as f64,
        modulus_spread,
        trajectory,
    })
}

/// Whether the union of every window of `window + 1` consecutive graphs is
/// connected (strongly, for digraphs). Periodic sequences are checked over
/// one period of window starts; finite ones over windows that fit inside.
pub fn check_joint_connectivity(seq: &GraphSequence, window: usize) -> bool {
    let len = seq.graphs.len();
    let starts = if seq.periodic {
        len
    } else {
        len.saturating_sub(window).max(1)
    };
    (0..starts).all(|s| {
        let n = seq.n();
        let mut edges = std::collections::BTreeSet::new();
        for t in s..=s + window {
            if !seq.periodic && t >= len {
                break;
            }
            for e in seq.at(t).edges() {
                edges.insert((e.from, e.to));
            }
        }
        let union = SignedGraph::new(
            n,
            seq.graphs[0].is_directed(),
            edges
                .into_iter()
                .map(|(u, v)| crate::graph::SignedEdge::positive(u, v))
                .collect(),
        )
        .expect("union of valid graphs is valid");
        let d = union.diagnostics();
        d.strongly_connected.unwrap_or(d.connected)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ContinuousMethod {
    /// Exact for undirected graphs, RK4 for digraphs.
    Auto,
    /// Eigendecomposition of the symmetric generator.
    Exact,
    /// Classical fixed-step fourth-order Runge–Kutta.
    Rk4,
}

/// Integrates `ẋ = −(αL⁺ + βL⁻)x` on `[0, t_end]` with step `dt`, recording
/// every `record_every`-th step plus the endpoint. `α > 0` and `β ≥ 0` are
/// free here; there is no step-size restriction in continuous time.
#[allow(clippy::too_many_arguments)]
pub fn simulate_continuous(
    g: &SignedGraph,
    rule: Rule,
    alpha: f64,
    beta: f64,
    x0: &[f64],
    t_end: f64,
    dt: f64,
    method: ContinuousMethod,
    record_every: usize,
) -> Result<Trajectory> {
    check_dim(g.n(), x0)?;
    if !(dt > 0.0) || !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need dt > 0 and t_end > 0, got dt = {dt}, t_end = {t_end}"
        )));
    }
    let gen = flow_generator(g, rule, alpha, beta)?;
    let method = match method {
        ContinuousMethod::Auto if g.is_directed() => ContinuousMethod::Rk4,
        ContinuousMethod::Auto => ContinuousMethod::Exact,
        ContinuousMethod::Exact if g.is_directed() => return Err(Error::DirectedGraphUnsupported),
        m => m,
    };
    let steps = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    let time_of = |k: usize| if k == steps { t_end } else { k as f64 * dt };
    let stride = record_every.max(1);
    let mut traj = Trajectory::empty(Clock::Continuous);
    traj.push_row(0.0, x0);
    match method {
        ContinuousMethod::Exact => {
            let eig = symmetric_eigen(&gen, spectral::EIGEN_TOL)?;
            let coeffs = eig.vectors.vec_mul(x0);
            let n = x0.len();
            for k in 1..=steps {
                if k % stride != 0 && k != steps {
                    continue;
                }
                let t = time_of(k);
                let mut x = vec![0.0; n];
                for (m, (&lam, &c)) in eig.values.iter().zip(&coeffs).enumerate() {
                    let f = (-lam * t).exp() * c;
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi += f * eig.vectors[(i, m)];
                    }
                }
                traj.push_row(t, &x);
            }
        }
        _ => {
            let f = |x: &[f64]| -> Vec<f64> { gen.mul_vec(x).iter().map(|v| -v).collect() };
            let axpy = |x: &[f64], a: f64, k: &[f64]| -> Vec<f64> {
                x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
            };
            let mut x = x0.to_vec();
            for k in 1..=steps {
                let h = time_of(k) - time_of(k - 1);
                let k1 = f(&x);
                let k2 = f(&axpy(&x, 0.5 * h, &k1));
                let k3 = f(&axpy(&x, 0.5 * h, &k2));
                let k4 = f(&axpy(&x, h, &k3));
                for i in 0..x.len() {
                    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                if k % stride == 0 || k == steps {
                    traj.push_row(time_of(k), &x);
                }
            }
        }
    }
    traj.steps = steps;
    Ok(traj)
}
