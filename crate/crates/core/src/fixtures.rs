//! Named example graphs and seeded random graph generators.
//!
//! * `t1`: triangle with one negative edge (unbalanced)
//! * `t2`: triangle with two negative edges, balanced as {0,1} | {2}
//! * `t3`: all-negative triangle (weakly balanced into singletons)
//! * `c4d`: positive 4-cycle with negative diagonals
//! * `d3`: directed 3-cycle 0→1 (+), 1→2 (−), 2→0 (−)

use crate::graph::{Sign, SignedEdge, SignedGraph};
use crate::rng::{unit_f64, SimRng};

use Sign::{Negative, Positive};

fn build(n: usize, edges: &[(usize, usize, Sign)]) -> SignedGraph {
    SignedGraph::undirected(n, edges).expect("fixture graphs are valid")
}

pub fn t1() -> SignedGraph {
    build(3, &[(0, 1, Positive), (1, 2, Positive), (0, 2, Negative)])
}

pub fn t2() -> SignedGraph {
    build(3, &[(0, 1, Positive), (0, 2, Negative), (1, 2, Negative)])
}

pub fn t3() -> SignedGraph {
    build(3, &[(0, 1, Negative), (1, 2, Negative), (0, 2, Negative)])
}

pub fn c4d() -> SignedGraph {
    build(
        4,
        &[
            (0, 1, Positive),
            (1, 2, Positive),
            (2, 3, Positive),
            (0, 3, Positive),
            (0, 2, Negative),
            (1, 3, Negative),
        ],
    )
}

pub fn d3() -> SignedGraph {
    SignedGraph::directed(3, &[(0, 1, Positive), (1, 2, Negative), (2, 0, Negative)])
        .expect("fixture graphs are valid")
}

/// Complete graph whose signs follow `groups`: positive inside a group,
/// negative across.
pub fn complete_by_groups(groups: &[usize]) -> SignedGraph {
    let n = groups.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let s = if groups[u] == groups[v] { Positive } else { Negative };
            edges.push((u, v, s));
        }
    }
    build(n, &edges)
}

/// K₄ balanced as {0,1} | {2,3}.
pub fn k4_balanced() -> SignedGraph {
    complete_by_groups(&[0, 0, 1, 1])
}

/// K₄ weakly balanced into {0,1} | {2} | {3}.
pub fn k4_three_groups() -> SignedGraph {
    complete_by_groups(&[0, 0, 1, 2])
}

/// Path graph `0-1-...-(n-1)` with the given signs.
pub fn path(signs: &[Sign]) -> SignedGraph {
    let edges: Vec<_> = signs.iter().enumerate().map(|(i, &s)| (i, i + 1, s)).collect();
    build(signs.len() + 1, &edges)
}

fn index_below(rng: &mut SimRng, k: usize) -> usize {
    ((unit_f64(rng) * k as f64) as usize).min(k - 1)
}

fn shuffled(rng: &mut SimRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, index_below(rng, i + 1));
    }
    p
}

/// Connected undirected graph: a random spanning tree plus each remaining
/// pair with probability `p_extra`. `sign_of(u, v, rng)` picks each sign.
pub fn random_connected(
    rng: &mut SimRng,
    n: usize,
    p_extra: f64,
    mut sign_of: impl FnMut(usize, usize, &mut SimRng) -> Sign,
) -> SignedGraph {
    let order = shuffled(rng, n);
    let mut pairs = std::collections::BTreeSet::new();
    for k in 1..n {
        let parent = order[index_below(rng, k)];
        let (u, v) = (order[k].min(parent), order[k].max(parent));
        pairs.insert((u, v));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !pairs.contains(&(u, v)) && unit_f64(rng) < p_extra {
                pairs.insert((u, v));
            }
        }
    }
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, sign_of(u, v, rng)))
        .collect();
    build(n, &edges)
}

/// Random signs, each negative with probability `p_neg`.
pub fn random_signed(rng: &mut SimRng, n: usize, p_extra: f64, p_neg: f64) -> SignedGraph {
    random_connected(rng, n, p_extra, |_, _, r| {
        if unit_f64(r) < p_neg {
            Negative
        } else {
            Positive
        }
    })
}

/// Random group labels in `0..groups`.
pub fn random_groups(rng: &mut SimRng, n: usize, groups: usize) -> Vec<usize> {
    (0..n).map(|_| index_below(rng, groups)).collect()
}

/// Signs dictated by `labels`: positive inside a group, negative across.
pub fn random_grouped(rng: &mut SimRng, labels: &[usize], p_extra: f64) -> SignedGraph {
    random_connected(rng, labels.len(), p_extra, |u, v, _| {
        if labels[u] == labels[v] {
            Positive
        } else {
            Negative
        }
    })
}

/// Strongly connected digraph: a directed Hamiltonian cycle through a random
/// node order plus each remaining ordered pair with probability `p_extra`.
/// Cycle arcs use `cycle_sign`, extra arcs `extra_sign`.
pub fn random_strong_digraph(
    rng: &mut SimRng,
    n: usize,
    p_extra: f64,
    mut cycle_sign: impl FnMut(usize, usize, &mut SimRng) -> Sign,
    mut extra_sign: impl FnMut(usize, usize, &mut SimRng) -> Sign,
) -> SignedGraph {
    let order = shuffled(rng, n);
    let mut arcs = std::collections::BTreeMap::new();
    for k in 0..n {
        let (u, v) = (order[k], order[(k + 1) % n]);
        let s = cycle_sign(u, v, rng);
        arcs.insert((u, v), s);
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && !arcs.contains_key(&(u, v)) && unit_f64(rng) < p_extra {
                let s = extra_sign(u, v, rng);
                arcs.insert((u, v), s);
            }
        }
    }
    let edges = arcs
        .into_iter()
        .map(|((u, v), s)| SignedEdge::new(u, v, s))
        .collect();
    SignedGraph::new(n, true, edges).expect("generated digraph is valid")
}
