//! Spectral analysis of update matrices: spectra, spectral radii, critical
//! couplings, convergence rates, eventual positivity and stationary left
//! vectors.
//!
//! Spectral radii of general matrices come from Gelfand's formula evaluated
//! by repeated normalised squaring, `ρ(M) = lim ‖M^(2^j)‖^(1/2^j)`. Unlike a
//! vector power iteration it does not stall when the dominant eigenvalues
//! form a complex or `±ρ` pair.

pub mod jacobi;

pub use jacobi::{svd, symmetric_eigen, Svd, SymmetricEigen};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::laplacian::{
    build_matrices, probabilistic_laplacians, update_matrix, update_matrix_from, DynamicsConfig,
    Rule,
};
use crate::matrix::{dot, Matrix};
use crate::report::KvBlock;

/// Default tolerance of the symmetric eigensolver.
pub const EIGEN_TOL: f64 = 1e-13;
/// Relative spectral gap below which a simple-eigenvalue claim is refused.
pub const GAP_TOL: f64 = 1e-8;
/// Entry tolerance for positivity of Perron vectors.
pub const POSITIVITY_TOL: f64 = 1e-10;

const MAX_SQUARINGS: usize = 200;

/// `ρ(M)`. Symmetric input goes through the eigensolver, everything else
/// through normalised repeated squaring until the estimate changes by less
/// than `tol` (relative).
pub fn spectral_radius(m: &Matrix, tol: f64) -> Result<f64> {
    assert!(m.is_square());
    if m.is_symmetric(1e-14) {
        let e = symmetric_eigen(m, EIGEN_TOL)?;
        return Ok(e.values.iter().fold(0.0, |r, v| r.max(v.abs())));
    }
    gelfand_radius(m, tol)
}

fn gelfand_radius(m: &Matrix, tol: f64) -> Result<f64> {
    let s0 = m.frobenius_norm();
    if s0 == 0.0 {
        return Ok(0.0);
    }
    let mut b = m.scale(1.0 / s0);
    let mut log_rho = s0.ln();
    let mut weight = 1.0;
    let mut prev = f64::INFINITY;
    let mut stable = 0;
    for _ in 0..MAX_SQUARINGS {
        let sq = b.matmul(&b);
        let c = sq.frobenius_norm();
        if c == 0.0 || !c.is_finite() {
            // nilpotent part exhausted the matrix
            return Ok(0.0);
        }
        weight *= 0.5;
        log_rho += weight * c.ln();
        b = sq.scale(1.0 / c);
        let est = log_rho.exp();
        if (est - prev).abs() <= tol * est.max(f64::MIN_POSITIVE) {
            stable += 1;
            if stable >= 3 {
                return Ok(est);
            }
        } else {
            stable = 0;
        }
        prev = est;
        if weight < 1e-300 {
            return Ok(est);
        }
    }
    Err(Error::NoConvergence(MAX_SQUARINGS))
}

/// `ρ(M − 𝟙qᵀ)`. When `M𝟙 = 𝟙` and `qᵀ𝟙 = 1` this is the largest modulus
/// over the spectrum of `M` with the eigenvalue 1 removed (Brauer).
pub fn deflated_spectral_radius(m: &Matrix, q: &[f64], tol: f64) -> Result<f64> {
    let ones = vec![1.0; m.nrows()];
    spectral_radius(&(m - &Matrix::outer(&ones, q)), tol)
}

/// `ρ(M − J)` with `J = 𝟙𝟙ᵀ/n`.
pub fn radius_without_consensus(m: &Matrix) -> Result<f64> {
    spectral_radius(&(m - &Matrix::averaging(m.nrows())), 1e-15)
}

fn require_undirected(g: &SignedGraph) -> Result<()> {
    if g.is_directed() {
        Err(Error::DirectedGraphUnsupported)
    } else {
        Ok(())
    }
}

fn require_positive_connected(g: &SignedGraph) -> Result<()> {
    if g.diagnostics().positive_connected {
        Ok(())
    } else {
        Err(Error::PositiveSubgraphDisconnected)
    }
}

/// Largest weighted positive in-degree.
fn max_weighted_positive_degree(g: &SignedGraph) -> f64 {
    let b = build_matrices(g);
    (0..g.n()).map(|i| b.d_plus[(i, i)]).fold(0.0, f64::max)
}

/// Bisection for the first zero of a continuous nondecreasing `f` on
/// `[0, ∞)` with `f(0) < 0`: bracket `[0, 1]` doubled until `f(hi) > 0`,
/// then at most 200 halvings.
fn bisect_crossing(mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while f(hi)? <= 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoConvergence(doublings));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `λ_max(I − αL⁺ − βL⁻ʳ − J)`, the quantity whose crossing of 1 marks the
/// deterministic repelling threshold.
pub fn repelling_threshold_function(g: &SignedGraph, alpha: f64, beta: f64) -> Result<f64> {
    require_undirected(g)?;
    let b = build_matrices(g);
    let m = update_matrix_from(&b, Rule::Repelling, alpha, beta);
    Ok(symmetric_eigen(&(&m - &Matrix::averaging(g.n())), EIGEN_TOL)?.max())
}

/// Threshold β* of the discrete repelling dynamics on an undirected graph:
/// consensus for β < β*, divergence for β > β*. `+∞` when G⁻ is empty.
pub fn critical_beta_deterministic(g: &SignedGraph, alpha: f64) -> Result<f64> {
    require_undirected(g)?;
    require_positive_connected(g)?;
    let max = 1.0 / max_weighted_positive_degree(g);
    if !(alpha > 0.0 && alpha < max) {
        return Err(Error::AlphaOutOfRange { alpha, max });
    }
    if !g.has_negative_edges() {
        return Ok(f64::INFINITY);
    }
    bisect_crossing(|beta| Ok(repelling_threshold_function(g, alpha, beta)? - 1.0))
}

/// Threshold β* of the repelling flow `ẋ = −(αL⁺ + βL⁻ʳ)x`: the largest β
/// for which `αL⁺ + βL⁻ʳ + J` stays positive definite. Any `α > 0`.
pub fn critical_beta_continuous(g: &SignedGraph, alpha: f64) -> Result<f64> {
    require_undirected(g)?;
    require_positive_connected(g)?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange {
            alpha,
            max: f64::INFINITY,
        });
    }
    if !g.has_negative_edges() {
        return Ok(f64::INFINITY);
    }
    let b = build_matrices(g);
    let j = Matrix::averaging(g.n());
    bisect_crossing(|beta| {
        let gen = b.l_plus.scale(alpha).add_scaled(beta, &b.l_minus_r);
        Ok(-symmetric_eigen(&(&gen + &j), EIGEN_TOL)?.min())
    })
}

/// Mean-square threshold of repelling gossip: the positive root of
/// `β(1+β) = α(1−α)·λ₂(L^p⁺)/λ_max(−L^pr⁻)`.
pub fn critical_beta_gossip(g: &SignedGraph, alpha: f64, mu: &[f64]) -> Result<f64> {
    require_undirected(g)?;
    require_positive_connected(g)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange { alpha, max: 1.0 });
    }
    let pl = probabilistic_laplacians(g, mu)?;
    if !g.has_negative_edges() {
        return Ok(f64::INFINITY);
    }
    let lambda2 = symmetric_eigen(&pl.l_plus, EIGEN_TOL)?.values[1];
    let lmax = symmetric_eigen(&pl.l_minus_r.scale(-1.0), EIGEN_TOL)?.max();
    let r = lambda2 / lmax * alpha * (1.0 - alpha);
    // 2r/(1+√(1+4r)) is the same root as (−1+√(1+4r))/2 without cancellation
    Ok(2.0 * r / (1.0 + (1.0 + 4.0 * r).sqrt()))
}

/// `ρ(M_β − J)` for the repelling update on a directed graph.
fn directed_repelling_residual(g: &SignedGraph, alpha: f64, beta: f64) -> Result<f64> {
    let b = build_matrices(g);
    radius_without_consensus(&update_matrix_from(&b, Rule::Repelling, alpha, beta))
}

/// Directed repelling bound: the supremum of η such that every eigenvalue of
/// `M_β` other than 1 lies strictly inside the unit disc for all β < η.
/// Only an upper bound for consensus-preserving couplings, never a proven
/// divergence threshold. Located by a grid scan for the first crossing
/// followed by bisection; `+∞` if no crossing exists below `1e6`.
pub fn critical_beta_directed(g: &SignedGraph, alpha: f64) -> Result<f64> {
    require_positive_connected(g)?;
    let max = 1.0 / max_weighted_positive_degree(g);
    if !(alpha > 0.0 && alpha < max) {
        return Err(Error::AlphaOutOfRange { alpha, max });
    }
    if !g.has_negative_edges() {
        return Ok(f64::INFINITY);
    }
    let bad = |beta: f64| -> Result<bool> { Ok(directed_repelling_residual(g, alpha, beta)? >= 1.0) };
    if bad(0.0)? {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while !bad(hi)? {
        hi *= 2.0;
        if hi > 1e6 {
            return Ok(f64::INFINITY);
        }
    }
    const GRID: usize = 400;
    let mut lo = 0.0;
    for k in 1..=GRID {
        let beta = hi * k as f64 / GRID as f64;
        if bad(beta)? {
            hi = beta;
            break;
        }
        lo = beta;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bad(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Gauge vector when G is structurally balanced (undirected sign pattern).
fn balanced_gauge(g: &SignedGraph) -> Result<Option<Vec<f64>>> {
    if !g.diagnostics().connected {
        return Ok(None);
    }
    Ok(g.check_structural_balance()?.gauge)
}

/// Asymptotic rate of the deterministic dynamics:
/// * opposing, not balanced: `ρ(W)`
/// * opposing, balanced with gauge `K`: `ρ(KWK − J)`
/// * repelling: `ρ(M − J)`
///
/// Opposing dynamics on a graph without negative edges are plain consensus
/// and use `ρ(W − J)`. A rate of 1 or more is reported as
/// [`Error::NotInConvergenceRegime`].
pub fn convergence_rate(g: &SignedGraph, cfg: &DynamicsConfig) -> Result<f64> {
    let u = update_matrix(g, cfg);
    let rate = match cfg.rule() {
        Rule::Repelling => radius_without_consensus(&u)?,
        Rule::Opposing if !g.has_negative_edges() => radius_without_consensus(&u)?,
        Rule::Opposing => match balanced_gauge(g)? {
            Some(k) => radius_without_consensus(&u.conjugate_signs(&k))?,
            None => spectral_radius(&u, 1e-15)?,
        },
    };
    if rate >= 1.0 - 1e-12 {
        return Err(Error::NotInConvergenceRegime(format!(
            "asymptotic rate {rate} is not below 1"
        )));
    }
    Ok(rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PositivityVerdict {
    Positive,
    NotPositive,
    /// `ρ` looks simple but another eigenvalue of the same modulus (such as
    /// `−ρ`) sits within the gap tolerance.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventualPositivity {
    pub verdict: PositivityVerdict,
    /// Smallest `k₀` such that `M^k > 0` entrywise for every `k₀ ≤ k ≤ budget`.
    pub witness: Option<usize>,
    /// The spectral test passed but no witness was found within the budget.
    pub witness_missing: bool,
    pub spectral_radius: f64,
    /// `ρ(M)` minus the largest modulus of the remaining spectrum.
    pub gap: f64,
}

/// Unit null vector of `a` and the smallest two singular values.
fn null_vector(a: &Matrix) -> Result<(Vec<f64>, f64, f64)> {
    let s = svd(a)?;
    let second = s.values.get(1).copied().unwrap_or(f64::INFINITY);
    Ok((s.right_vector(0), s.values[0], second))
}

fn sum_positive(mut v: Vec<f64>) -> Vec<f64> {
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Eventual positivity via the strong Perron–Frobenius property of `M` and
/// `Mᵀ`: `ρ(M)` must be a simple positive eigenvalue, strictly dominant,
/// with entrywise positive right and left eigenvectors. When it holds the
/// powers `M^1..M^k_budget` are scanned for a witness.
pub fn is_eventually_positive(m: &Matrix, k_budget: usize) -> Result<EventualPositivity> {
    assert!(m.is_square());
    let n = m.nrows();
    let norm = m.frobenius_norm();
    let rho = spectral_radius(m, 1e-15)?;
    let mut out = EventualPositivity {
        verdict: PositivityVerdict::NotPositive,
        witness: None,
        witness_missing: false,
        spectral_radius: rho,
        gap: 0.0,
    };
    let tol = GAP_TOL * norm.max(f64::MIN_POSITIVE);
    if rho <= tol {
        return Ok(out);
    }
    let shifted = m - &Matrix::identity(n).scale(rho);
    let (x, sx, second) = null_vector(&shifted)?;
    let (y, sy, _) = null_vector(&shifted.transpose())?;
    if sx > tol || sy > tol {
        // ρ is attained only by a negative or complex eigenvalue
        return Ok(out);
    }
    if second <= tol {
        // at least two independent eigenvectors for ρ: not simple
        return Ok(out);
    }
    let (x, y) = (sum_positive(x), sum_positive(y));
    let yx = dot(&y, &x);
    if yx.abs() <= tol {
        // Jordan block at ρ: not simple
        return Ok(out);
    }
    // spectral projector onto the ρ-eigenspace; removing it leaves the rest
    let proj = Matrix::outer(&x, &y).scale(rho / yx);
    let rest = spectral_radius(&(m - &proj), 1e-15)?;
    out.gap = rho - rest;
    if out.gap <= tol {
        out.verdict = PositivityVerdict::Indeterminate;
        return Ok(out);
    }
    let positive = |v: &[f64]| {
        let scale = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        v.iter().all(|&e| e > POSITIVITY_TOL * scale)
    };
    if !(positive(&x) && positive(&y)) {
        return Ok(out);
    }
    out.verdict = PositivityVerdict::Positive;
    let mut power = Matrix::identity(n);
    let mut last_bad = 0;
    for k in 1..=k_budget {
        power = power.matmul(m);
        let s = power.max_abs();
        if s > 0.0 {
            power = power.scale(1.0 / s);
        }
        if power.as_slice().iter().any(|&v| !(v > 0.0)) {
            last_bad = k;
        }
    }
    if last_bad < k_budget {
        out.witness = Some(last_bad + 1);
    } else {
        out.witness_missing = true;
    }
    Ok(out)
}

/// Left eigenvector of the eigenvalue 1 normalised to sum 1. Fails with
/// [`Error::EigenvalueOneNotSimple`] when 1 is missing, repeated or
/// defective.
pub fn stationary_left_vector(m: &Matrix) -> Result<Vec<f64>> {
    assert!(m.is_square());
    let n = m.nrows();
    let tol = GAP_TOL * m.frobenius_norm().max(1.0);
    let shifted = m - &Matrix::identity(n);
    let (y, sy, second) = null_vector(&shifted.transpose())?;
    let (x, sx, _) = null_vector(&shifted)?;
    if sy > tol || sx > tol || second <= tol {
        return Err(Error::EigenvalueOneNotSimple);
    }
    if dot(&x, &y).abs() <= tol {
        return Err(Error::EigenvalueOneNotSimple);
    }
    let total: f64 = y.iter().sum();
    if total.abs() <= tol {
        return Err(Error::EigenvalueOneNotSimple);
    }
    Ok(y.iter().map(|v| v / total).collect())
}

/// `(KWK, K)` for opposing dynamics on a structurally balanced graph.
pub fn gauge_conjugated_update(
    g: &SignedGraph,
    cfg: &DynamicsConfig,
) -> Result<Option<(Matrix, Vec<f64>)>> {
    Ok(balanced_gauge(g)?.map(|k| (update_matrix(g, cfg).conjugate_signs(&k), k)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub symmetric: bool,
    /// Full ascending spectrum, symmetric update matrices only.
    pub eigenvalues: Option<Vec<f64>>,
    pub spectral_radius: f64,
    pub critical_beta: Option<f64>,
    /// The critical β is the directed bound, not a proven threshold.
    pub critical_beta_upper_bound_only: bool,
    pub convergence_rate: Option<f64>,
    /// Eventual positivity of `M` (repelling) or `KWK` (balanced opposing).
    pub eventually_positive: Option<EventualPositivity>,
    /// `q(β)` of `M` (repelling) or `w` of `KWK` (balanced opposing).
    pub left_vector: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

pub const DEFAULT_POWER_BUDGET: usize = 200;

/// Runs every applicable analysis on the update matrix of `(g, cfg)`.
/// Inapplicable or failing pieces are left empty with a warning.
pub fn spectral_report(g: &SignedGraph, cfg: &DynamicsConfig) -> Result<SpectralReport> {
    let u = update_matrix(g, cfg);
    let symmetric = u.is_symmetric(1e-14);
    let mut warnings = Vec::new();
    let eigenvalues = if symmetric {
        Some(symmetric_eigen(&u, EIGEN_TOL)?.values)
    } else {
        None
    };
    let rho = spectral_radius(&u, 1e-15)?;

    let d = g.diagnostics();
    let b = build_matrices(g);
    let max_deg = (0..g.n())
        .map(|i| cfg.alpha() * b.d_plus[(i, i)] + cfg.beta() * b.d_minus[(i, i)])
        .fold(0.0, f64::max);
    if cfg.rule() == Rule::Opposing && max_deg >= 1.0 {
        warnings.push(format!(
            "alpha*deg+ + beta*deg- reaches {max_deg}; the contraction condition needs < 1"
        ));
    }

    let (critical_beta, upper_only) = match cfg.rule() {
        Rule::Opposing => (None, false),
        Rule::Repelling => {
            let r = if g.is_directed() {
                critical_beta_directed(g, cfg.alpha())
            } else {
                critical_beta_deterministic(g, cfg.alpha())
            };
            match r {
                Ok(b) => (Some(b), g.is_directed()),
                Err(e) => {
                    warnings.push(format!("critical beta unavailable: {e}"));
                    (None, false)
                }
            }
        }
    };

    let convergence_rate = match convergence_rate(g, cfg) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(e.to_string());
            None
        }
    };

    let target = match cfg.rule() {
        Rule::Repelling => Some(u.clone()),
        Rule::Opposing => gauge_conjugated_update(g, cfg)?.map(|(kwk, _)| kwk),
    };
    let (eventually_positive, left_vector) = match target {
        Some(t) => {
            let ep = is_eventually_positive(&t, DEFAULT_POWER_BUDGET)?;
            let lv = match stationary_left_vector(&t) {
                Ok(v) => Some(v),
                Err(e) => {
                    warnings.push(format!("left vector unavailable: {e}"));
                    None
                }
            };
            (Some(ep), lv)
        }
        None => (None, None),
    };
    if !d.connected {
        warnings.push("graph is not connected".into());
    }
    Ok(SpectralReport {
        symmetric,
        eigenvalues,
        spectral_radius: rho,
        critical_beta,
        critical_beta_upper_bound_only: upper_only,
        convergence_rate,
        eventually_positive,
        left_vector,
        warnings,
    })
}

impl SpectralReport {
    pub fn to_kv(&self) -> KvBlock {
        use crate::report::fmt_human;
        let list = |v: &[f64]| v.iter().map(|&x| fmt_human(x)).collect::<Vec<_>>().join(",");
        let mut b = KvBlock::new();
        if let Some(ev) = &self.eigenvalues {
            b.push("eigenvalues", list(ev));
        }
        b.push_num("spectral_radius", self.spectral_radius);
        if let Some(beta) = self.critical_beta {
            b.push_num("critical_beta", beta);
            b.push("critical_beta_upper_bound_only", self.critical_beta_upper_bound_only);
        }
        match self.convergence_rate {
            Some(r) => b.push_num("convergence_rate", r),
            None => b.push("convergence_rate", "none"),
        }
        if let Some(ep) = &self.eventually_positive {
            b.push("eventually_positive", format!("{:?}", ep.verdict));
            if let Some(k) = ep.witness {
                b.push("eventually_positive_witness", k);
            }
        }
        if let Some(lv) = &self.left_vector {
            b.push("left_vector", list(lv));
        }
        for w in &self.warnings {
            b.push("warning", w);
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn radius_of_simple_matrices() {
        let stochastic = Matrix::from_rows(&[[0.5, 0.5, 0.0], [0.1, 0.6, 0.3], [0.0, 0.2, 0.8]]);
        assert!((spectral_radius(&stochastic, 1e-15).unwrap() - 1.0).abs() < 1e-12);
        let d = Matrix::diagonal(&[0.5, -0.9]);
        assert!((spectral_radius(&d, 1e-15).unwrap() - 0.9).abs() < 1e-15);
        // rotation by 90° scaled by 0.7: complex pair ±0.7i
        let rot = Matrix::from_rows(&[[0.0, -0.7], [0.7, 0.0]]);
        assert!((gelfand_radius(&rot, 1e-15).unwrap() - 0.7).abs() < 1e-12);
        // nilpotent
        let nil = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(gelfand_radius(&nil, 1e-15).unwrap(), 0.0);
    }

    #[test]
    fn t1_critical_beta_is_half_alpha() {
        let g = fixtures::t1();
        assert!((critical_beta_deterministic(&g, 0.2).unwrap() - 0.1).abs() < 1e-9);
        assert!((critical_beta_deterministic(&g, 0.1).unwrap() - 0.05).abs() < 1e-9);
        assert!((critical_beta_continuous(&g, 1.0).unwrap() - 0.5).abs() < 1e-9);
        assert!(matches!(
            critical_beta_deterministic(&g, 0.6),
            Err(Error::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn unsigned_graph_has_infinite_threshold() {
        use crate::graph::Sign::Positive;
        let g = fixtures::path(&[Positive, Positive]);
        assert_eq!(critical_beta_deterministic(&g, 0.2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn t1_gossip_threshold() {
        let g = fixtures::t1();
        let mu = crate::laplacian::gossip_mu(&g).unwrap();
        let b = critical_beta_gossip(&g, 0.5, &mu).unwrap();
        assert!((b - (1.5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!((b - 0.1123724).abs() < 1e-7);
    }

    #[test]
    fn rate_examples() {
        let r = convergence_rate(&fixtures::t2(), &DynamicsConfig::opposing(0.2, 0.2).unwrap());
        assert!((r.unwrap() - 0.4).abs() < 1e-12);
        use crate::graph::Sign::Positive;
        let path = fixtures::path(&[Positive, Positive]);
        let r = convergence_rate(&path, &DynamicsConfig::repelling(0.2, 0.0).unwrap());
        assert!((r.unwrap() - 0.8).abs() < 1e-12);
        let r = convergence_rate(&fixtures::t1(), &DynamicsConfig::repelling(0.2, 0.11).unwrap());
        assert!(matches!(r, Err(Error::NotInConvergenceRegime(_))));
    }

    #[test]
    fn eventual_positivity_examples() {
        let cfg = DynamicsConfig::opposing(0.2, 0.2).unwrap();
        let (kwk, _) = gauge_conjugated_update(&fixtures::t2(), &cfg).unwrap().unwrap();
        let ep = is_eventually_positive(&kwk, 200).unwrap();
        assert_eq!(ep.verdict, PositivityVerdict::Positive);
        assert_eq!(ep.witness, Some(1));

        let m = update_matrix(&fixtures::t1(), &DynamicsConfig::repelling(0.2, 0.05).unwrap());
        let ep = is_eventually_positive(&m, 200).unwrap();
        assert_eq!(ep.verdict, PositivityVerdict::Positive);
        assert!(ep.witness.unwrap() <= 200);

        let w = update_matrix(&fixtures::t1(), &DynamicsConfig::opposing(0.2, 0.2).unwrap());
        assert_eq!(is_eventually_positive(&w, 200).unwrap().verdict, PositivityVerdict::NotPositive);

        let id = is_eventually_positive(&Matrix::identity(3), 10).unwrap();
        assert_eq!(id.verdict, PositivityVerdict::NotPositive);
        // simple ρ = 1 tied with −1
        let swing = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let ep = is_eventually_positive(&swing, 10).unwrap();
        assert_eq!(ep.verdict, PositivityVerdict::Indeterminate);
    }

    #[test]
    fn stationary_vectors() {
        let m = update_matrix(&fixtures::t1(), &DynamicsConfig::repelling(0.2, 0.05).unwrap());
        for q in stationary_left_vector(&m).unwrap() {
            assert!((q - 1.0 / 3.0).abs() < 1e-12);
        }
        let cfg = DynamicsConfig::opposing(0.2, 0.2).unwrap();
        let (kwk, _) = gauge_conjugated_update(&fixtures::d3(), &cfg).unwrap().unwrap();
        for w in stationary_left_vector(&kwk).unwrap() {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(
            stationary_left_vector(&Matrix::identity(3)),
            Err(Error::EigenvalueOneNotSimple)
        );
    }
}
