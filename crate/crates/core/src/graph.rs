//! Signed graphs: validation, connectivity, structural and weak balance, and
//! the `signet-graph v1` text format.
//!
//! For directed graphs an edge `(from, to)` means `to` listens to `from`, so
//! the degrees reported for a node count its in-neighbours.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedEdge {
    pub from: usize,
    pub to: usize,
    pub sign: Sign,
    pub weight: f64,
}

impl SignedEdge {
    pub fn new(from: usize, to: usize, sign: Sign) -> Self {
        SignedEdge {
            from,
            to,
            sign,
            weight: 1.0,
        }
    }

    pub fn positive(from: usize, to: usize) -> Self {
        Self::new(from, to, Sign::Positive)
    }

    pub fn negative(from: usize, to: usize) -> Self {
        Self::new(from, to, Sign::Negative)
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDiagnostics {
    /// Underlying unsigned, undirected graph is connected.
    pub connected: bool,
    /// `None` for undirected graphs.
    pub strongly_connected: Option<bool>,
    /// G⁺ spans every node and is connected (strongly, when directed).
    pub positive_connected: bool,
    pub negative_nonempty: bool,
    pub degree: Vec<usize>,
    pub positive_degree: Vec<usize>,
    pub negative_degree: Vec<usize>,
    /// G⁺ (undirected view) is connected, has at least 3 nodes and no
    /// articulation point.
    pub positive_vertex_connectivity_ge_2: bool,
}

impl GraphDiagnostics {
    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    pub fn max_positive_degree(&self) -> usize {
        self.positive_degree.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BalanceVerdict {
    StronglyBalanced,
    WeaklyBalanced,
    Unbalanced,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceResult {
    pub verdict: BalanceVerdict,
    /// Node sets, the one holding node 0 first, the rest by smallest member.
    pub partition: Option<Vec<Vec<usize>>>,
    /// ±1 per node, +1 on the first partition set. Strong balance only.
    pub gauge: Option<Vec<f64>>,
    /// G⁻ has no edge, so the signed analysis does not apply.
    pub negative_edges_absent: bool,
}

impl BalanceResult {
    fn unbalanced(negative_edges_absent: bool) -> Self {
        BalanceResult {
            verdict: BalanceVerdict::Unbalanced,
            partition: None,
            gauge: None,
            negative_edges_absent,
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.verdict != BalanceVerdict::Unbalanced
    }

    /// Group index of every node, following the partition order.
    pub fn labels(&self, n: usize) -> Option<Vec<usize>> {
        let parts = self.partition.as_ref()?;
        let mut labels = vec![0; n];
        for (g, set) in parts.iter().enumerate() {
            for &v in set {
                labels[v] = g;
            }
        }
        Some(labels)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    n: usize,
    directed: bool,
    edges: Vec<SignedEdge>,
    diagnostics: GraphDiagnostics,
}

impl SignedGraph {
    /// Validates the edge list and caches connectivity diagnostics.
    /// Undirected edges are normalised to `from < to`; edges are kept sorted.
    pub fn new(n: usize, directed: bool, edges: Vec<SignedEdge>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            for node in [e.from, e.to] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if e.from == e.to {
                return Err(Error::SelfLoop(e.from));
            }
            if !(e.weight > 0.0) || !e.weight.is_finite() {
                return Err(Error::NonpositiveWeight(e.from, e.to, e.weight));
            }
            if !directed && e.from > e.to {
                std::mem::swap(&mut e.from, &mut e.to);
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::DuplicateEdge(e.from, e.to));
            }
            out.push(e);
        }
        out.sort_by_key(|e| (e.from, e.to));
        let diagnostics = compute_diagnostics(n, directed, &out);
        Ok(SignedGraph {
            n,
            directed,
            edges: out,
            diagnostics,
        })
    }

    /// Undirected graph from `(u, v, sign)` triples with unit weights.
    pub fn undirected(n: usize, edges: &[(usize, usize, Sign)]) -> Result<Self> {
        Self::new(
            n,
            false,
            edges.iter().map(|&(u, v, s)| SignedEdge::new(u, v, s)).collect(),
        )
    }

    /// Directed graph from `(from, to, sign)` triples with unit weights.
    pub fn directed(n: usize, edges: &[(usize, usize, Sign)]) -> Result<Self> {
        Self::new(
            n,
            true,
            edges.iter().map(|&(u, v, s)| SignedEdge::new(u, v, s)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn diagnostics(&self) -> &GraphDiagnostics {
        &self.diagnostics
    }

    pub fn connectivity_report(&self) -> GraphDiagnostics {
        self.diagnostics.clone()
    }

    pub fn has_negative_edges(&self) -> bool {
        self.diagnostics.negative_nonempty
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.iter().any(|e| e.weight != 1.0)
    }

    /// Sign of the edge joining `u` and `v` in either direction, if any.
    pub fn sign_between(&self, u: usize, v: usize) -> Option<Sign> {
        self.edges
            .iter()
            .find(|e| (e.from == u && e.to == v) || (e.from == v && e.to == u))
            .map(|e| e.sign)
    }

    /// Neighbour lists of the undirected view, with edge signs.
    pub fn undirected_neighbors(&self) -> Vec<Vec<(usize, Sign)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.from].push((e.to, e.sign));
            adj[e.to].push((e.from, e.sign));
        }
        adj
    }

    /// Same graph with node `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .map(|e| SignedEdge {
                from: perm[e.from],
                to: perm[e.to],
                ..*e
            })
            .collect();
        Self::new(self.n, self.directed, edges)
    }

    fn require_connected(&self) -> Result<()> {
        if self.diagnostics.connected {
            Ok(())
        } else {
            Err(Error::DisconnectedGraph)
        }
    }

    /// Two-colouring test: positive edges join equal colours, negative edges
    /// opposite ones. Directed graphs are judged on their undirected view.
    pub fn check_structural_balance(&self) -> Result<BalanceResult> {
        self.require_connected()?;
        if !self.has_negative_edges() {
            return Ok(BalanceResult::unbalanced(true));
        }
        let adj = self.undirected_neighbors();
        let mut color: Vec<Option<f64>> = vec![None; self.n];
        color[0] = Some(1.0);
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued nodes are coloured");
            for &(v, s) in &adj[u] {
                let want = cu * s.value();
                match color[v] {
                    None => {
                        color[v] = Some(want);
                        queue.push_back(v);
                    }
                    Some(cv) if cv != want => return Ok(BalanceResult::unbalanced(false)),
                    Some(_) => {}
                }
            }
        }
        let gauge: Vec<f64> = color.into_iter().map(|c| c.expect("connected")).collect();
        let first: Vec<usize> = (0..self.n).filter(|&i| gauge[i] > 0.0).collect();
        let second: Vec<usize> = (0..self.n).filter(|&i| gauge[i] < 0.0).collect();
        Ok(BalanceResult {
            verdict: BalanceVerdict::StronglyBalanced,
            partition: Some(vec![first, second]),
            gauge: Some(gauge),
            negative_edges_absent: false,
        })
    }

    /// Weak balance: the components of G⁺ (undirected view) are the groups,
    /// no negative edge may fall inside a group and there must be ≥ 2 groups.
    pub fn check_weak_balance(&self) -> Result<BalanceResult> {
        self.require_connected()?;
        if !self.has_negative_edges() {
            return Ok(BalanceResult::unbalanced(true));
        }
        let comp = positive_components(self.n, &self.edges);
        if self
            .edges
            .iter()
            .any(|e| e.sign.is_negative() && comp[e.from] == comp[e.to])
        {
            return Ok(BalanceResult::unbalanced(false));
        }
        let count = comp.iter().copied().max().map_or(0, |m| m + 1);
        if count < 2 {
            return Ok(BalanceResult::unbalanced(false));
        }
        let mut parts = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            parts[c].push(v);
        }
        Ok(BalanceResult {
            verdict: BalanceVerdict::WeaklyBalanced,
            partition: Some(parts),
            gauge: None,
            negative_edges_absent: false,
        })
    }

    /// Renders the `signet-graph v1` text form (1-based node ids).
    pub fn to_text(&self) -> String {
        let mut out = String::from("signet-graph v1\n");
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "directed {}", u8::from(self.directed));
        for e in &self.edges {
            let s = if e.sign.is_negative() { "-1" } else { "+1" };
            if e.weight == 1.0 {
                let _ = writeln!(out, "{} {} {}", e.from + 1, e.to + 1, s);
            } else {
                let _ = writeln!(out, "{} {} {} {}", e.from + 1, e.to + 1, s, e.weight);
            }
        }
        out
    }

    /// Parses the `signet-graph v1` text form. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, token: &str, msg: &str| Error::Parse {
            line,
            token: token.to_string(),
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (ln, header) = lines.next().ok_or_else(|| perr(1, "", "empty graph file"))?;
        if header != "signet-graph v1" {
            return Err(perr(ln, header, "expected header `signet-graph v1`"));
        }
        let mut keyed = |key: &str| -> Result<(usize, String)> {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| perr(ln, "", &format!("missing `{key}` line")))?;
            match l.split_whitespace().collect::<Vec<_>>()[..] {
                [k, v] if k == key => Ok((ln, v.to_string())),
                _ => Err(perr(ln, l, &format!("expected `{key} <value>`"))),
            }
        };
        let (nl, ntok) = keyed("n")?;
        let n: usize = ntok
            .parse()
            .map_err(|_| perr(nl, &ntok, "node count must be a non-negative integer"))?;
        if n < 2 {
            return Err(perr(nl, &ntok, "a graph needs at least 2 nodes"));
        }
        let (dl, dtok) = keyed("directed")?;
        let directed = match dtok.as_str() {
            "0" => false,
            "1" => true,
            _ => return Err(perr(dl, &dtok, "directed flag must be 0 or 1")),
        };

        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        for (ln, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if !(3..=4).contains(&toks.len()) {
                return Err(perr(ln, l, "expected `u v s [w]`"));
            }
            let node = |t: &str| -> Result<usize> {
                let v: usize = t.parse().map_err(|_| perr(ln, t, "node id must be an integer"))?;
                if v == 0 || v > n {
                    return Err(perr(ln, t, &format!("node id outside 1..{n}")));
                }
                Ok(v - 1)
            };
            let u = node(toks[0])?;
            let v = node(toks[1])?;
            let sign = match toks[2] {
                "+1" | "1" | "+" => Sign::Positive,
                "-1" | "-" => Sign::Negative,
                t => return Err(perr(ln, t, "sign must be +1 or -1")),
            };
            let weight = match toks.get(3) {
                Some(t) => {
                    let w: f64 = t.parse().map_err(|_| perr(ln, t, "weight must be a number"))?;
                    if !(w > 0.0) || !w.is_finite() {
                        return Err(perr(ln, t, "weight must be positive"));
                    }
                    w
                }
                None => 1.0,
            };
            if u == v {
                return Err(perr(ln, toks[0], "self-loop"));
            }
            let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
            if !seen.insert(key) {
                return Err(perr(ln, l, "duplicate edge"));
            }
            edges.push(SignedEdge {
                from: u,
                to: v,
                sign,
                weight,
            });
        }
        Self::new(n, directed, edges)
    }
}

/// Component index per node for the undirected view of G⁺, numbered in
/// order of smallest member.
fn positive_components(n: usize, edges: &[SignedEdge]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for e in edges.iter().filter(|e| !e.sign.is_negative()) {
        adj[e.from].push(e.to);
        adj[e.to].push(e.from);
    }
    components(&adj)
}

fn components(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

fn reaches_all(adj: &[Vec<usize>], start: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == adj.len()
}

/// Strong connectivity by forward and backward reachability from node 0.
fn strongly_connected(n: usize, arcs: impl Iterator<Item = (usize, usize)> + Clone) -> bool {
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for (u, v) in arcs {
        fwd[u].push(v);
        bwd[v].push(u);
    }
    reaches_all(&fwd, 0) && reaches_all(&bwd, 0)
}

/// Articulation points of an undirected graph (Tarjan low-link).
pub(crate) fn articulation_points(adj: &[Vec<usize>]) -> Vec<usize> {
    fn dfs(
        u: usize,
        parent: Option<usize>,
        adj: &[Vec<usize>],
        timer: &mut usize,
        disc: &mut [usize],
        low: &mut [usize],
        cut: &mut [bool],
    ) {
        *timer += 1;
        disc[u] = *timer;
        low[u] = *timer;
        let mut children = 0;
        for &v in &adj[u] {
            if disc[v] == 0 {
                children += 1;
                dfs(v, Some(u), adj, timer, disc, low, cut);
                low[u] = low[u].min(low[v]);
                if parent.is_some() && low[v] >= disc[u] {
                    cut[u] = true;
                }
            } else if Some(v) != parent {
                low[u] = low[u].min(disc[v]);
            }
        }
        if parent.is_none() && children > 1 {
            cut[u] = true;
        }
    }
    let n = adj.len();
    let (mut disc, mut low, mut cut) = (vec![0; n], vec![0; n], vec![false; n]);
    let mut timer = 0;
    for s in 0..n {
        if disc[s] == 0 {
            dfs(s, None, adj, &mut timer, &mut disc, &mut low, &mut cut);
        }
    }
    (0..n).filter(|&v| cut[v]).collect()
}

fn compute_diagnostics(n: usize, directed: bool, edges: &[SignedEdge]) -> GraphDiagnostics {
    let mut und = vec![Vec::new(); n];
    let mut pos_und = vec![Vec::new(); n];
    let mut positive_degree = vec![0; n];
    let mut negative_degree = vec![0; n];
    for e in edges {
        und[e.from].push(e.to);
        und[e.to].push(e.from);
        if e.sign.is_negative() {
            negative_degree[e.to] += 1;
            if !directed {
                negative_degree[e.from] += 1;
            }
        } else {
            pos_und[e.from].push(e.to);
            pos_und[e.to].push(e.from);
            positive_degree[e.to] += 1;
            if !directed {
                positive_degree[e.from] += 1;
            }
        }
    }
    let degree = positive_degree
        .iter()
        .zip(&negative_degree)
        .map(|(p, q)| p + q)
        .collect();
    let connected = reaches_all(&und, 0);
    let pos_und_connected = reaches_all(&pos_und, 0);
    let (strongly, positive_connected) = if directed {
        let all = edges.iter().map(|e| (e.from, e.to));
        let pos = edges
            .iter()
            .filter(|e| !e.sign.is_negative())
            .map(|e| (e.from, e.to));
        (Some(strongly_connected(n, all)), strongly_connected(n, pos))
    } else {
        (None, pos_und_connected)
    };
    let kappa2 = n >= 3 && pos_und_connected && articulation_points(&pos_und).is_empty();
    GraphDiagnostics {
        connected,
        strongly_connected: strongly,
        positive_connected,
        negative_nonempty: edges.iter().any(|e| e.sign.is_negative()),
        degree,
        positive_degree,
        negative_degree,
        positive_vertex_connectivity_ge_2: kappa2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use Sign::*;

    #[test]
    fn degrees_of_t1_and_t2() {
        let t1 = fixtures::t1();
        let d = t1.diagnostics();
        assert_eq!(d.positive_degree, vec![1, 2, 1]);
        assert_eq!(d.negative_degree, vec![1, 0, 1]);
        assert_eq!(fixtures::t2().diagnostics().degree, vec![2, 2, 2]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            SignedGraph::undirected(3, &[(0, 0, Positive)]),
            Err(Error::SelfLoop(0))
        );
        assert_eq!(
            SignedGraph::undirected(3, &[(0, 1, Positive), (1, 0, Negative)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            SignedGraph::undirected(3, &[(0, 3, Positive)]),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        );
        assert!(matches!(
            SignedGraph::new(3, false, vec![SignedEdge::positive(0, 1).with_weight(0.0)]),
            Err(Error::NonpositiveWeight(..))
        ));
        assert_eq!(SignedGraph::undirected(1, &[]), Err(Error::TooFewNodes(1)));
        // antiparallel arcs are distinct in a digraph
        assert!(SignedGraph::directed(2, &[(0, 1, Positive), (1, 0, Negative)]).is_ok());
    }

    #[test]
    fn balance_of_the_triangles() {
        let r = fixtures::t2().check_structural_balance().unwrap();
        assert_eq!(r.verdict, BalanceVerdict::StronglyBalanced);
        assert_eq!(r.partition, Some(vec![vec![0, 1], vec![2]]));
        assert_eq!(r.gauge, Some(vec![1.0, 1.0, -1.0]));

        let w = fixtures::t2().check_weak_balance().unwrap();
        assert_eq!(w.verdict, BalanceVerdict::WeaklyBalanced);
        assert_eq!(w.partition, Some(vec![vec![0, 1], vec![2]]));

        for g in [fixtures::t1(), fixtures::t3()] {
            assert_eq!(
                g.check_structural_balance().unwrap().verdict,
                BalanceVerdict::Unbalanced
            );
        }
        assert_eq!(
            fixtures::t1().check_weak_balance().unwrap().verdict,
            BalanceVerdict::Unbalanced
        );
        let t3 = fixtures::t3().check_weak_balance().unwrap();
        assert_eq!(t3.verdict, BalanceVerdict::WeaklyBalanced);
        assert_eq!(t3.partition, Some(vec![vec![0], vec![1], vec![2]]));
    }

    #[test]
    fn unsigned_graph_is_flagged_not_balanced() {
        let g = SignedGraph::undirected(3, &[(0, 1, Positive), (1, 2, Positive)]).unwrap();
        let r = g.check_structural_balance().unwrap();
        assert_eq!(r.verdict, BalanceVerdict::Unbalanced);
        assert!(r.negative_edges_absent);
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = SignedGraph::undirected(4, &[(0, 1, Positive), (2, 3, Negative)]).unwrap();
        assert_eq!(g.check_structural_balance(), Err(Error::DisconnectedGraph));
        assert_eq!(g.check_weak_balance(), Err(Error::DisconnectedGraph));
    }

    #[test]
    fn connectivity_examples() {
        let d = fixtures::t1().connectivity_report();
        assert!(d.connected && d.positive_connected);
        assert!(!d.positive_vertex_connectivity_ge_2);
        assert_eq!(d.strongly_connected, None);

        assert!(fixtures::c4d().diagnostics().positive_vertex_connectivity_ge_2);
        let d3 = fixtures::d3();
        assert_eq!(d3.diagnostics().strongly_connected, Some(true));
        assert!(!d3.diagnostics().positive_connected);
        assert_eq!(d3.diagnostics().degree, vec![1, 1, 1]);
    }

    #[test]
    fn articulation_points_of_a_bowtie() {
        // two triangles sharing node 2
        let adj = vec![
            vec![1, 2],
            vec![0, 2],
            vec![0, 1, 3, 4],
            vec![2, 4],
            vec![2, 3],
        ];
        assert_eq!(articulation_points(&adj), vec![2]);
    }

    #[test]
    fn text_round_trip() {
        let g = SignedGraph::new(
            4,
            true,
            vec![
                SignedEdge::negative(3, 0).with_weight(0.1),
                SignedEdge::positive(0, 1),
                SignedEdge::positive(1, 0).with_weight(2.5e-7),
            ],
        )
        .unwrap();
        let text = g.to_text();
        assert_eq!(
            text,
            "signet-graph v1\nn 4\ndirected 1\n1 2 +1\n2 1 +1 0.00000025\n4 1 -1 0.1\n"
        );
        let back = SignedGraph::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_sign = "signet-graph v1\nn 3\ndirected 0\n1 2 +1\n2 3 0\n";
        assert!(matches!(
            SignedGraph::parse(bad_sign),
            Err(Error::Parse { line: 5, ref token, .. }) if token == "0"
        ));
        let self_loop = "# comment\nsignet-graph v1\nn 3\ndirected 0\n\n1 1 +1\n";
        assert!(matches!(
            SignedGraph::parse(self_loop),
            Err(Error::Parse { line: 6, .. })
        ));
        assert!(matches!(
            SignedGraph::parse("signet-graph v2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SignedGraph::parse("signet-graph v1\nn 3\ndirected 0\n1 4 -1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            SignedGraph::parse("signet-graph v1\nn 3\ndirected 0\n1 2 -1\n2 1 +1\n"),
            Err(Error::Parse { line: 5, .. })
        ));
    }
}
