//! Command implementations. Each returns named artifacts; [`emit`] writes
//! them into the output directory or concatenates them on stdout.

use std::path::Path;

use serde::Serialize;
use signet_core::deterministic::{predict_limit, simulate_continuous, simulate_with, ContinuousMethod, SimOptions};
use signet_core::gossip::{monte_carlo, GossipProcess, MonteCarloOptions, X0Spec};
use signet_core::graph::{BalanceResult, GraphDiagnostics};
use signet_core::laplacian::{gossip_mu, DynamicsConfig};
use signet_core::report::{fmt_data, fmt_human, join_data, KvBlock};
use signet_core::rng::{rng_for_run, uniform};
use signet_core::spectral::{
    critical_beta_continuous, critical_beta_deterministic, critical_beta_directed, critical_beta_gossip,
    spectral_report, SpectralReport,
};
use signet_core::SignedGraph;

use crate::args::{Format, RunConfig, X0Arg};
use crate::error::CliError;

/// One output file: `name` inside `--out`, or a section of stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Artifact {
            name: name.into(),
            contents: contents.into(),
        }
    }
}

pub fn load_graph(path: &Path) -> Result<SignedGraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    SignedGraph::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Writes artifacts under `out`, or returns them joined for stdout.
pub fn emit(artifacts: &[Artifact], out: Option<&Path>) -> Result<Option<String>, CliError> {
    match out {
        Some(dir) => {
            for a in artifacts {
                let path = dir.join(&a.name);
                if let Some(parent) = path.parent() {
                    std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
                }
                std::fs::write(&path, &a.contents).map_err(|e| CliError::io(&path, e))?;
            }
            Ok(None)
        }
        None => Ok(Some(artifacts.iter().map(|a| a.contents.as_str()).collect())),
    }
}

fn dynamics(rc: &RunConfig) -> Result<DynamicsConfig, CliError> {
    let cfg = DynamicsConfig::new(rc.require_rule()?, rc.require_alpha()?, rc.require_beta()?)?;
    Ok(match rc.bound {
        Some(a) => cfg.with_bound(a)?,
        None => cfg,
    })
}

/// Sets as `{1,2}|{3}` with 1-based ids.
fn partition_text(parts: &[Vec<usize>]) -> String {
    parts
        .iter()
        .map(|s| {
            let ids: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
            format!("{{{}}}", ids.join(","))
        })
        .collect::<Vec<_>>()
        .join("|")
}

fn one_based(parts: &Option<Vec<Vec<usize>>>) -> Option<Vec<Vec<usize>>> {
    parts
        .as_ref()
        .map(|p| p.iter().map(|s| s.iter().map(|v| v + 1).collect()).collect())
}

#[derive(Serialize)]
struct BalanceJson {
    verdict: String,
    partition: Option<Vec<Vec<usize>>>,
    negative_edges_absent: bool,
}

impl From<&BalanceResult> for BalanceJson {
    fn from(b: &BalanceResult) -> Self {
        BalanceJson {
            verdict: format!("{:?}", b.verdict),
            partition: one_based(&b.partition),
            negative_edges_absent: b.negative_edges_absent,
        }
    }
}

#[derive(Serialize)]
struct AnalysisJson<'a> {
    nodes: usize,
    edges: usize,
    directed: bool,
    balance: BalanceJson,
    weak_balance: BalanceJson,
    diagnostics: &'a GraphDiagnostics,
    spectral: Option<SpectralReport>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialises");
    s.push('\n');
    s
}

pub fn analyze(rc: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let g = load_graph(rc.require_graph()?)?;
    let strong = g.check_structural_balance()?;
    let weak = g.check_weak_balance()?;
    // the spectral part needs couplings; balance alone does not
    let spectral = match (rc.rule, rc.alpha, rc.beta) {
        (Some(_), Some(_), Some(_)) => Some(spectral_report(&g, &dynamics(rc)?)?),
        (None, None, None) => None,
        _ => return Err(CliError::Usage("--rule, --alpha and --beta go together".into())),
    };
    let d = g.diagnostics();
    if rc.format == Format::Json {
        let doc = AnalysisJson {
            nodes: g.n(),
            edges: g.edges().len(),
            directed: g.is_directed(),
            balance: (&strong).into(),
            weak_balance: (&weak).into(),
            diagnostics: d,
            spectral,
        };
        return Ok(vec![Artifact::new("analysis.json", to_json(&doc))]);
    }
    let mut b = KvBlock::new();
    b.push("nodes", g.n());
    b.push("edges", g.edges().len());
    b.push("directed", g.is_directed());
    b.push("verdict", format!("{:?}", strong.verdict));
    if let Some(p) = &strong.partition {
        b.push("partition", partition_text(p));
    }
    b.push("weak_verdict", format!("{:?}", weak.verdict));
    if let Some(p) = &weak.partition {
        b.push("weak_partition", partition_text(p));
    }
    if strong.negative_edges_absent {
        b.push("warning", "no negative edges");
    }
    b.push("connected", d.connected);
    if let Some(s) = d.strongly_connected {
        b.push("strongly_connected", s);
    }
    b.push("positive_connected", d.positive_connected);
    b.push("positive_vertex_connectivity_ge_2", d.positive_vertex_connectivity_ge_2);
    let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    b.push("degree", list(&d.degree));
    b.push("positive_degree", list(&d.positive_degree));
    b.push("negative_degree", list(&d.negative_degree));
    if let Some(s) = spectral {
        b.extend(s.to_kv());
    }
    Ok(vec![Artifact::new("analysis.txt", b.render())])
}

fn fixed_x0(rc: &RunConfig, n: usize) -> Result<Vec<f64>, CliError> {
    match &rc.x0 {
        Some(X0Arg::Vector(v)) => {
            if v.len() != n {
                return Err(CliError::Precondition(format!(
                    "x0 has {} entries, the graph has {n} nodes",
                    v.len()
                )));
            }
            Ok(v.clone())
        }
        Some(X0Arg::Uniform { lo, hi, seed }) => {
            let mut rng = rng_for_run(*seed, 0);
            Ok((0..n).map(|_| uniform(&mut rng, *lo, *hi)).collect())
        }
        None => Err(CliError::Usage("--x0 is required".into())),
    }
}

pub fn simulate(rc: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let g = load_graph(rc.require_graph()?)?;
    let x0 = fixed_x0(rc, g.n())?;
    let record_every = rc.record_every.unwrap_or(1);
    if record_every == 0 {
        return Err(CliError::Usage("--record-every must be at least 1".into()));
    }
    if rc.continuous {
        let t_end = rc.t_end.unwrap_or(10.0);
        let dt = rc.dt.unwrap_or(1e-3);
        if !(t_end > 0.0 && dt > 0.0 && dt <= t_end) {
            return Err(CliError::Usage(format!("need 0 < dt <= t_end, got dt {dt}, t_end {t_end}")));
        }
        let method = match rc.method.as_deref().unwrap_or("auto") {
            "auto" => ContinuousMethod::Auto,
            "exact" => ContinuousMethod::Exact,
            "rk4" => ContinuousMethod::Rk4,
            m => return Err(CliError::Usage(format!("unknown method `{m}`"))),
        };
        let (alpha, beta) = (rc.require_alpha()?, rc.require_beta()?);
        let traj = simulate_continuous(&g, rc.require_rule()?, alpha, beta, &x0, t_end, dt, method, record_every)?;
        return Ok(vec![Artifact::new("trajectory.csv", traj.to_csv())]);
    }
    let cfg = dynamics(rc)?;
    if cfg.bound().is_some() {
        return Err(CliError::Usage("--bound applies to gossip runs only".into()));
    }
    let steps = rc.steps.unwrap_or(10_000);
    let opts = SimOptions {
        record_every,
        ..SimOptions::default()
    };
    let traj = simulate_with(&g, &cfg, &x0, steps, &opts)?;
    let pred = predict_limit(&g, &cfg, &x0)?;
    let pred_artifact = if rc.format == Format::Json {
        Artifact::new("prediction.json", to_json(&pred))
    } else {
        let mut b = pred.to_kv();
        b.push("termination", format!("{:?}", traj.termination));
        b.push("steps", traj.steps);
        b.push("final_state", join_data(traj.final_state()));
        Artifact::new("prediction.txt", b.render())
    };
    Ok(vec![Artifact::new("trajectory.csv", traj.to_csv()), pred_artifact])
}

pub fn gossip(rc: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let g = load_graph(rc.require_graph()?)?;
    let cfg = dynamics(rc)?;
    let runs = rc.runs.unwrap_or(100);
    let horizon = rc.steps.unwrap_or(10_000);
    if runs == 0 || horizon == 0 {
        return Err(CliError::Usage("--runs and --steps must be at least 1".into()));
    }
    if rc.dump_runs && rc.out.is_none() {
        return Err(CliError::Usage("--dump-runs needs --out".into()));
    }
    let x0 = match &rc.x0 {
        Some(X0Arg::Vector(v)) => {
            if v.len() != g.n() {
                return Err(CliError::Precondition(format!(
                    "x0 has {} entries, the graph has {} nodes",
                    v.len(),
                    g.n()
                )));
            }
            X0Spec::Fixed(v.clone())
        }
        Some(X0Arg::Uniform { lo, hi, seed }) => X0Spec::Uniform {
            lo: *lo,
            hi: *hi,
            seed: *seed,
        },
        None => {
            let a = cfg.bound().unwrap_or(1.0);
            X0Spec::Uniform {
                lo: -a,
                hi: a,
                seed: rc.seed,
            }
        }
    };
    let p = GossipProcess::new(g, rc.seed)?;
    let mut opts = MonteCarloOptions::for_config(&cfg);
    opts.monitor.extreme_floor = rc.extreme_floor;
    opts.monitor.survivor = rc.survivors;
    if rc.dump_runs {
        opts.keep_runs = true;
        opts.monitor.record_every = Some(rc.record_every.unwrap_or(1).max(1));
    }
    let result = monte_carlo(&p, &cfg, &x0, runs, horizon, &opts)?;
    let mut out = vec![Artifact::new("summary.json", {
        let mut s = result.summary.to_json();
        s.push('\n');
        s
    })];
    if rc.format == Format::Csv {
        if let Some(c) = &result.mse_curve {
            let mut csv = String::from("t,mse\n");
            for (t, v) in c.times.iter().zip(&c.mean_square_error) {
                csv.push_str(&format!("{t},{}\n", fmt_data(*v)));
            }
            out.push(Artifact::new("mse.csv", csv));
        }
        let n = p.graph().n();
        let mut csv = String::from("run,outcome,log2_scale");
        for i in 1..=n {
            csv.push_str(&format!(",x{i}"));
        }
        csv.push('\n');
        for (r, (state, scale)) in result
            .summary
            .terminal_states
            .iter()
            .zip(&result.summary.terminal_log2_scale)
            .enumerate()
        {
            csv.push_str(&format!("{r},{},{scale},{}\n", result.summary.outcomes[r].name(), join_data(state)));
        }
        out.push(Artifact::new("terminal.csv", csv));
    }
    for (r, run) in result.runs.iter().enumerate() {
        if let Some(t) = &run.trajectory {
            out.push(Artifact::new(format!("runs/run_{r:05}.csv"), t.to_csv()));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct CriticalBetaJson {
    alpha: f64,
    directed: bool,
    deterministic: Option<f64>,
    deterministic_upper_bound_only: bool,
    continuous: Option<f64>,
    gossip: Option<f64>,
}

pub fn critical_beta(rc: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let g = load_graph(rc.require_graph()?)?;
    let alpha = rc.require_alpha()?;
    let doc = if g.is_directed() {
        CriticalBetaJson {
            alpha,
            directed: true,
            deterministic: Some(critical_beta_directed(&g, alpha)?),
            deterministic_upper_bound_only: true,
            continuous: None,
            gossip: None,
        }
    } else {
        let gossip = if alpha < 1.0 {
            Some(critical_beta_gossip(&g, alpha, &gossip_mu(&g)?)?)
        } else {
            None
        };
        CriticalBetaJson {
            alpha,
            directed: false,
            deterministic: Some(critical_beta_deterministic(&g, alpha)?),
            deterministic_upper_bound_only: false,
            continuous: Some(critical_beta_continuous(&g, alpha)?),
            gossip,
        }
    };
    if rc.format == Format::Json {
        return Ok(vec![Artifact::new("critical_beta.json", to_json(&doc))]);
    }
    let mut b = KvBlock::new();
    b.push_num("alpha", alpha);
    let mut push = |k: &str, v: Option<f64>| {
        if let Some(v) = v {
            b.push(k, fmt_human(v));
        }
    };
    push("deterministic_beta_star", doc.deterministic);
    push("continuous_beta_star", doc.continuous);
    push("gossip_beta_star", doc.gossip);
    if doc.deterministic_upper_bound_only {
        b.push("deterministic_upper_bound_only", true);
    }
    Ok(vec![Artifact::new("critical_beta.txt", b.render())])
}
