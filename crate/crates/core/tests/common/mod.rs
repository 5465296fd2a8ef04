//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use proptest::prelude::*;
use signet_core::fixtures;
use signet_core::graph::Sign;
use signet_core::rng::seeded;
use signet_core::{Matrix, SignedGraph};

/// Connected random signed graph on 3..=max_n nodes.
pub fn arb_signed_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (3..=max_n, any::<u64>(), 0.0..0.8f64, 0.0..1.0f64).prop_map(|(n, seed, p, q)| {
        fixtures::random_signed(&mut seeded(seed), n, p, q)
    })
}

/// Connected graph whose signs follow a random grouping into 2..=groups sets.
pub fn arb_grouped_graph(max_n: usize, groups: usize) -> impl Strategy<Value = SignedGraph> {
    (3..=max_n, any::<u64>(), 0.0..0.8f64, 2..=groups).prop_map(|(n, seed, p, k)| {
        let mut rng = seeded(seed);
        let labels = fixtures::random_groups(&mut rng, n, k);
        fixtures::random_grouped(&mut rng, &labels, p)
    })
}

pub fn arb_state(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0..1.0f64, n)
}

/// Strong balance by trying every bipartition with node 0 on side +.
pub fn brute_force_bipartition(g: &SignedGraph) -> Option<Vec<bool>> {
    let n = g.n();
    assert!(n <= 16);
    'mask: for mask in 0u32..(1 << (n - 1)) {
        let side: Vec<bool> = (0..n).map(|v| v == 0 || mask & (1 << (v - 1)) == 0).collect();
        for e in g.edges() {
            let same = side[e.from] == side[e.to];
            if same == e.sign.is_negative() {
                continue 'mask;
            }
        }
        return Some(side);
    }
    None
}

/// Negative-edge counts of every simple cycle (undirected view), each
/// cycle once: rooted at its smallest node, first step to the smaller of
/// the two root neighbours.
pub fn cycle_negative_counts(g: &SignedGraph) -> Vec<usize> {
    let n = g.n();
    let mut sign = vec![vec![None; n]; n];
    for e in g.edges() {
        sign[e.from][e.to] = Some(e.sign);
        sign[e.to][e.from] = Some(e.sign);
    }
    let mut out = Vec::new();
    for root in 0..n {
        let mut on_path = vec![false; n];
        on_path[root] = true;
        walk(root, root, None, 0, &sign, &mut on_path, &mut out);
    }
    out
}

fn walk(
    root: usize,
    at: usize,
    first: Option<usize>,
    neg: usize,
    sign: &[Vec<Option<Sign>>],
    on_path: &mut [bool],
    out: &mut Vec<usize>,
) {
    let n = sign.len();
    for next in (root + 1)..n {
        let Some(s) = sign[at][next] else { continue };
        if on_path[next] {
            continue;
        }
        let neg2 = neg + usize::from(s == Sign::Negative);
        let first2 = first.or(Some(next));
        // closing edge back to root, counted once per orientation pair
        if let Some(back) = sign[next][root] {
            if at != root && first2.unwrap() < next {
                out.push(neg2 + usize::from(back == Sign::Negative));
            }
        }
        on_path[next] = true;
        walk(root, next, first2, neg2, sign, on_path, out);
        on_path[next] = false;
    }
}

/// `xᵀ L x` by plain matrix arithmetic.
pub fn quadratic(l: &Matrix, x: &[f64]) -> f64 {
    x.iter().zip(l.mul_vec(x)).map(|(a, b)| a * b).sum()
}

pub fn to_nalgebra(m: &Matrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Spectral radius from nalgebra's general (complex) eigenvalues.
pub fn oracle_radius(m: &Matrix) -> f64 {
    to_nalgebra(m)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn oracle_sym_eigen(m: &Matrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_nalgebra(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
