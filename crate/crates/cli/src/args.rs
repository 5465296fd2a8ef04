//! Command-line grammar and its resolution into a [`RunConfig`].
//!
//! Every run flag can also come from a config file (`--config PATH`) in the
//! `key = value` report format; flags given on the command line win.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use signet_core::laplacian::Rule;
use signet_core::report::KvBlock;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "signet", version, about = "Consensus dynamics over signed networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Balance verdicts, graph diagnostics and the spectral report.
    Analyze(RunArgs),
    /// Deterministic trajectory (discrete or continuous) and its predicted limit.
    Simulate(RunArgs),
    /// Monte Carlo ensemble of the gossip process.
    Gossip(RunArgs),
    /// Critical negative coupling for the repelling rule.
    CriticalBeta(RunArgs),
    /// Runs the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Config file in `key = value` form; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// `opposing` or `repelling`.
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// State bound A of the projected gossip rule.
    #[arg(long, allow_negative_numbers = true)]
    pub bound: Option<f64>,
    /// Inline vector `1,0,0.5`, a file of numbers, or `uniform:lo:hi:seed`.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Discrete steps (simulate) or events per run (gossip).
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; without it artifacts go to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Continuous-time flow instead of the discrete update (simulate).
    #[arg(long)]
    pub continuous: bool,
    /// Final time of the continuous flow.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Step of the continuous integrator.
    #[arg(long)]
    pub dt: Option<f64>,
    /// `auto`, `exact` or `rk4`.
    #[arg(long)]
    pub method: Option<String>,
    /// Keep every k-th state in trajectory output.
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Check the per-event lower bound on the extreme state (gossip).
    #[arg(long)]
    pub extreme_floor: bool,
    /// Track per-node divergence in unbounded runs (gossip).
    #[arg(long)]
    pub survivors: bool,
    /// Write one trajectory CSV per run (gossip, needs --out).
    #[arg(long)]
    pub dump_runs: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Run only these criteria (repeatable).
    #[arg(long)]
    pub only: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum X0Arg {
    Vector(Vec<f64>),
    Uniform { lo: f64, hi: f64, seed: u64 },
}

/// Fully resolved options of one run command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: Option<PathBuf>,
    pub rule: Option<Rule>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub bound: Option<f64>,
    pub x0: Option<X0Arg>,
    pub steps: Option<usize>,
    pub runs: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub continuous: bool,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub method: Option<String>,
    pub record_every: Option<usize>,
    pub extreme_floor: bool,
    pub survivors: bool,
    pub dump_runs: bool,
}

const CONFIG_KEYS: &[&str] = &[
    "graph", "rule", "alpha", "beta", "bound", "x0", "steps", "runs", "seed", "out", "format",
    "t_end", "dt", "method", "record_every",
];

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{key}: cannot parse `{v}`")))
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_num::<f64>("x0", t))
        .collect()
}

/// `uniform:lo:hi:seed`, an existing file, or an inline list.
pub fn parse_x0(spec: &str) -> Result<X0Arg, CliError> {
    if let Some(rest) = spec.strip_prefix("uniform:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, seed] = parts[..] else {
            return Err(CliError::Usage(format!("x0: expected uniform:lo:hi:seed, got `{spec}`")));
        };
        let (lo, hi): (f64, f64) = (parse_num("x0", lo)?, parse_num("x0", hi)?);
        if !(lo < hi) {
            return Err(CliError::Usage(format!("x0: need lo < hi, got {lo} and {hi}")));
        }
        return Ok(X0Arg::Uniform {
            lo,
            hi,
            seed: parse_num("x0", seed)?,
        });
    }
    let path = Path::new(spec);
    let values = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        parse_numbers(&text)?
    } else {
        parse_numbers(spec)?
    };
    if values.is_empty() {
        return Err(CliError::Usage("x0: no values given".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage("x0: values must be finite".into()));
    }
    Ok(X0Arg::Vector(values))
}

impl RunConfig {
    /// Merges `args` over the config file they name, if any.
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                let block = KvBlock::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?;
                if let Some((k, _)) = block.entries.iter().find(|(k, _)| !CONFIG_KEYS.contains(&k.as_str())) {
                    return Err(CliError::Usage(format!("unknown config key `{k}`")));
                }
                block
            }
            None => KvBlock::new(),
        };
        let get = |k: &str| file.get(k);
        let num = |flag: Option<f64>, k: &str| -> Result<Option<f64>, CliError> {
            match (flag, get(k)) {
                (Some(v), _) => Ok(Some(v)),
                (None, Some(v)) => Ok(Some(parse_num(k, v)?)),
                (None, None) => Ok(None),
            }
        };
        let count = |flag: Option<usize>, k: &str| -> Result<Option<usize>, CliError> {
            match (flag, get(k)) {
                (Some(v), _) => Ok(Some(v)),
                (None, Some(v)) => Ok(Some(parse_num(k, v)?)),
                (None, None) => Ok(None),
            }
        };
        let rule = match args.rule.as_deref().or(get("rule")) {
            Some(r) => Some(r.parse::<Rule>().map_err(|e| CliError::Usage(e.to_string()))?),
            None => None,
        };
        let x0 = match args.x0.as_deref().or(get("x0")) {
            Some(s) => Some(parse_x0(s)?),
            None => None,
        };
        let format = if args.json {
            Format::Json
        } else if args.csv {
            Format::Csv
        } else {
            match get("format") {
                None | Some("text") => Format::Text,
                Some("json") => Format::Json,
                Some("csv") => Format::Csv,
                Some(f) => return Err(CliError::Usage(format!("unknown format `{f}`"))),
            }
        };
        let seed = match (args.seed, get("seed")) {
            (Some(s), _) => s,
            (None, Some(s)) => parse_num("seed", s)?,
            (None, None) => 0,
        };
        Ok(RunConfig {
            graph: args.graph.clone().or_else(|| get("graph").map(PathBuf::from)),
            rule,
            alpha: num(args.alpha, "alpha")?,
            beta: num(args.beta, "beta")?,
            bound: num(args.bound, "bound")?,
            x0,
            steps: count(args.steps, "steps")?,
            runs: count(args.runs, "runs")?,
            seed,
            out: args.out.clone().or_else(|| get("out").map(PathBuf::from)),
            format,
            continuous: args.continuous,
            t_end: num(args.t_end, "t_end")?,
            dt: num(args.dt, "dt")?,
            method: args.method.clone().or_else(|| get("method").map(str::to_string)),
            record_every: count(args.record_every, "record_every")?,
            extreme_floor: args.extreme_floor,
            survivors: args.survivors,
            dump_runs: args.dump_runs,
        })
    }

    pub fn require_graph(&self) -> Result<&Path, CliError> {
        self.graph
            .as_deref()
            .ok_or_else(|| CliError::Usage("--graph is required".into()))
    }

    pub fn require_rule(&self) -> Result<Rule, CliError> {
        self.rule
            .ok_or_else(|| CliError::Usage("--rule is required".into()))
    }

    pub fn require_alpha(&self) -> Result<f64, CliError> {
        self.alpha
            .ok_or_else(|| CliError::Usage("--alpha is required".into()))
    }

    pub fn require_beta(&self) -> Result<f64, CliError> {
        self.beta
            .ok_or_else(|| CliError::Usage("--beta is required".into()))
    }
}
