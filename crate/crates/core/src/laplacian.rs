//! Signed Laplacians, update matrices, quadratic forms and the expected
//! second moments of the gossip step matrices.
//!
//! Adjacency follows the in-neighbour convention: `[A⁺]_ij = w` when there is
//! an edge from `j` to `i`. Negative adjacency entries are stored as `−w`.
//! Edge weights scale the couplings, so an edge of weight `w` acts with
//! `α·w` or `β·w`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Opposing,
    Repelling,
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "opposing" => Ok(Rule::Opposing),
            "repelling" => Ok(Rule::Repelling),
            _ => Err(Error::InvalidParameter(format!(
                "unknown rule `{s}` (expected opposing or repelling)"
            ))),
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::Opposing => "opposing",
            Rule::Repelling => "repelling",
        })
    }
}

/// Interaction rule and couplings. Construction validates the ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicsConfig {
    rule: Rule,
    alpha: f64,
    beta: f64,
    bound: Option<f64>,
}

impl DynamicsConfig {
    /// `alpha` must lie in (0, 1) and `beta` be non-negative.
    pub fn new(rule: Rule, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta must be non-negative, got {beta}"
            )));
        }
        Ok(DynamicsConfig {
            rule,
            alpha,
            beta,
            bound: None,
        })
    }

    pub fn opposing(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Rule::Opposing, alpha, beta)
    }

    pub fn repelling(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Rule::Repelling, alpha, beta)
    }

    /// Adds the state bound `A` used by the projected gossip rule.
    pub fn with_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound > 0.0) || !bound.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bound must be positive, got {bound}"
            )));
        }
        self.bound = Some(bound);
        Ok(self)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        let c = Self::new(self.rule, self.alpha, beta)?;
        Ok(DynamicsConfig {
            bound: self.bound,
            ..c
        })
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixBundle {
    pub d_plus: Matrix,
    pub d_minus: Matrix,
    pub a_plus: Matrix,
    /// Entries `−w` on negative edges.
    pub a_minus: Matrix,
    pub l_plus: Matrix,
    /// `D⁻ − A⁻`
    pub l_minus_o: Matrix,
    /// `−D⁻ − A⁻`
    pub l_minus_r: Matrix,
}

impl MatrixBundle {
    /// Opposing (`L⁺ + L⁻ᵒ`) or repelling (`L⁺ + L⁻ʳ`) signed Laplacian.
    pub fn signed_laplacian(&self, rule: Rule) -> Matrix {
        match rule {
            Rule::Opposing => &self.l_plus + &self.l_minus_o,
            Rule::Repelling => &self.l_plus + &self.l_minus_r,
        }
    }

    pub fn l_minus(&self, rule: Rule) -> &Matrix {
        match rule {
            Rule::Opposing => &self.l_minus_o,
            Rule::Repelling => &self.l_minus_r,
        }
    }
}

pub fn build_matrices(g: &SignedGraph) -> MatrixBundle {
    let n = g.n();
    let mut a_plus = Matrix::zeros(n, n);
    let mut a_minus = Matrix::zeros(n, n);
    for e in g.edges() {
        let (target, s) = if e.sign.is_negative() {
            (&mut a_minus, -e.weight)
        } else {
            (&mut a_plus, e.weight)
        };
        target[(e.to, e.from)] = s;
        if !g.is_directed() {
            target[(e.from, e.to)] = s;
        }
    }
    let d_plus = Matrix::diagonal(&a_plus.row_sums());
    let d_minus = Matrix::diagonal(&a_minus.row_sums().iter().map(|v| -v).collect::<Vec<_>>());
    let l_plus = &d_plus - &a_plus;
    let l_minus_o = &d_minus - &a_minus;
    let l_minus_r = &d_minus.scale(-1.0) - &a_minus;
    MatrixBundle {
        d_plus,
        d_minus,
        a_plus,
        a_minus,
        l_plus,
        l_minus_o,
        l_minus_r,
    }
}

/// `W = I − αL⁺ − βL⁻ᵒ` (opposing) or `M = I − αL⁺ − βL⁻ʳ` (repelling).
pub fn update_matrix(g: &SignedGraph, cfg: &DynamicsConfig) -> Matrix {
    update_matrix_from(&build_matrices(g), cfg.rule, cfg.alpha, cfg.beta)
}

pub(crate) fn update_matrix_from(b: &MatrixBundle, rule: Rule, alpha: f64, beta: f64) -> Matrix {
    Matrix::identity(b.l_plus.nrows())
        .add_scaled(-alpha, &b.l_plus)
        .add_scaled(-beta, b.l_minus(rule))
}

/// Generator `αL⁺ + βL⁻` of the continuous-time flow `ẋ = −(αL⁺ + βL⁻)x`.
/// Unlike the discrete step, `α` is any positive number here.
pub fn flow_generator(g: &SignedGraph, rule: Rule, alpha: f64, beta: f64) -> Result<Matrix> {
    if !(alpha > 0.0) || !alpha.is_finite() || !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "flow couplings need alpha > 0 and beta >= 0, got ({alpha}, {beta})"
        )));
    }
    let b = build_matrices(g);
    Ok(b.l_plus.scale(alpha).add_scaled(beta, b.l_minus(rule)))
}

/// Edge-sum form of `xᵀLx` for the opposing or repelling Laplacian.
pub fn quadratic_form(g: &SignedGraph, rule: Rule, x: &[f64]) -> Result<f64> {
    if g.is_directed() {
        return Err(Error::DirectedGraphUnsupported);
    }
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    let mut total = 0.0;
    for e in g.edges() {
        let (xi, xj) = (x[e.from], x[e.to]);
        total += match (e.sign.is_negative(), rule) {
            (false, _) => e.weight * (xi - xj).powi(2),
            (true, Rule::Opposing) => e.weight * (xi + xj).powi(2),
            (true, Rule::Repelling) => -e.weight * (xi - xj).powi(2),
        };
    }
    Ok(total)
}

/// Laplacians weighted by edge selection probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticLaplacians {
    /// Off-diagonal `−p` on positive edges, diagonal `Σp`.
    pub l_plus: Matrix,
    /// Off-diagonal `+p` on negative edges, diagonal `Σp`.
    pub l_minus_o: Matrix,
    /// Off-diagonal `+p` on negative edges, diagonal `−Σp`.
    pub l_minus_r: Matrix,
}

pub(crate) const MU_TOL: f64 = 1e-12;

/// Checks that `mu` is aligned with the edges, positive, and sums to 1.
pub fn validate_mu(g: &SignedGraph, mu: &[f64]) -> Result<()> {
    if mu.len() != g.edges().len() {
        return Err(Error::DimensionMismatch {
            expected: g.edges().len(),
            got: mu.len(),
        });
    }
    let sum: f64 = mu.iter().sum();
    if mu.iter().any(|&p| !(p > 0.0)) || (sum - 1.0).abs() > MU_TOL {
        return Err(Error::ProbabilityNotNormalized(sum));
    }
    Ok(())
}

/// Selection probability of each edge (in `g.edges()` order) when a uniform
/// node wakes up and picks a uniform neighbour: `(1/deg_i + 1/deg_j)/n`.
pub fn gossip_mu(g: &SignedGraph) -> Result<Vec<f64>> {
    if g.is_directed() {
        return Err(Error::DirectedGraphUnsupported);
    }
    let deg = &g.diagnostics().degree;
    let n = g.n() as f64;
    Ok(g.edges()
        .iter()
        .map(|e| (1.0 / deg[e.from] as f64 + 1.0 / deg[e.to] as f64) / n)
        .collect())
}

pub fn probabilistic_laplacians(g: &SignedGraph, mu: &[f64]) -> Result<ProbabilisticLaplacians> {
    if g.is_directed() {
        return Err(Error::DirectedGraphUnsupported);
    }
    validate_mu(g, mu)?;
    let n = g.n();
    let mut l_plus = Matrix::zeros(n, n);
    let mut l_minus_o = Matrix::zeros(n, n);
    let mut l_minus_r = Matrix::zeros(n, n);
    for (e, &p) in g.edges().iter().zip(mu) {
        let (i, j) = (e.from, e.to);
        if e.sign.is_negative() {
            for m in [&mut l_minus_o, &mut l_minus_r] {
                m[(i, j)] += p;
                m[(j, i)] += p;
            }
            l_minus_o[(i, i)] += p;
            l_minus_o[(j, j)] += p;
            l_minus_r[(i, i)] -= p;
            l_minus_r[(j, j)] -= p;
        } else {
            l_plus[(i, j)] -= p;
            l_plus[(j, i)] -= p;
            l_plus[(i, i)] += p;
            l_plus[(j, j)] += p;
        }
    }
    Ok(ProbabilisticLaplacians {
        l_plus,
        l_minus_o,
        l_minus_r,
    })
}

/// `E[W_t²]` for one gossip event drawn from `mu`, summed edge by edge from
/// the squared rank-one step matrices. With `gauge = true` (opposing rule on
/// a structurally balanced graph) returns `K·E[W_t²]·K`.
pub fn expected_second_moment(
    g: &SignedGraph,
    cfg: &DynamicsConfig,
    mu: &[f64],
    gauge: bool,
) -> Result<Matrix> {
    if g.is_directed() {
        return Err(Error::DirectedGraphUnsupported);
    }
    validate_mu(g, mu)?;
    let k = if gauge {
        if cfg.rule != Rule::Opposing {
            return Err(Error::InvalidParameter(
                "gauge form is defined for the opposing rule".into(),
            ));
        }
        let bal = g.check_structural_balance()?;
        Some(bal.gauge.ok_or(Error::GaugeRequestedOnUnbalancedGraph)?)
    } else {
        None
    };
    let n = g.n();
    let mut m = Matrix::identity(n);
    for (e, &p) in g.edges().iter().zip(mu) {
        let (i, j) = (e.from, e.to);
        // W_t = I − c·vvᵀ with |v|² = 2, so W_t² = I − 2c(1 − c)·vvᵀ.
        let (c, s) = match (e.sign.is_negative(), cfg.rule) {
            (false, _) => (cfg.alpha * e.weight, -1.0),
            (true, Rule::Opposing) => (cfg.beta * e.weight, 1.0),
            (true, Rule::Repelling) => (-cfg.beta * e.weight, -1.0),
        };
        let coef = p * 2.0 * c * (1.0 - c);
        m[(i, i)] -= coef;
        m[(j, j)] -= coef;
        m[(i, j)] -= coef * s;
        m[(j, i)] -= coef * s;
    }
    Ok(match k {
        Some(k) => m.conjugate_signs(&k),
        None => m,
    })
}
