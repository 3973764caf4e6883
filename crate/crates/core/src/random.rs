//! Seeded random instance families used for stress testing. All generators are
//! driven by ChaCha so that a seed pins the instance across platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::Rational;
use crate::graph::Graph;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) on exactly `n` vertices.
pub fn gnp(rng: &mut TestRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_valid_edges(n, edges)
}

/// G(n, p) with `n` uniform in `1..=max_n`.
pub fn random_graph(rng: &mut TestRng, max_n: usize, p: f64) -> Graph {
    let n = rng.gen_range(1..=max_n);
    gnp(rng, n, p)
}

/// A cluster graph plus a set `X` of at most `max_x` extra vertices.
///
/// Identifiers: `X` first, then the cliques. Inside each clique the vertices
/// are split into a few signature groups with a common neighborhood in `X`,
/// which produces large twin classes.
pub fn cluster_plus_x(rng: &mut TestRng, max_n: usize, max_x: usize) -> (Graph, Vec<usize>) {
    let ell = rng.gen_range(0..=max_x.min(max_n.saturating_sub(1)));
    let rest = rng.gen_range(1..=max_n - ell);
    let x: Vec<usize> = (0..ell).collect();
    let mut edges = Vec::new();
    for u in 0..ell {
        for v in u + 1..ell {
            if rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    let mut next = ell;
    let mut left = rest;
    while left > 0 {
        let size = rng.gen_range(1..=left);
        let clique: Vec<usize> = (next..next + size).collect();
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                edges.push((u, v));
            }
        }
        let signatures: Vec<u32> = (0..rng.gen_range(1..=2))
            .map(|_| rng.gen_range(0..1u32 << ell))
            .collect();
        for &v in &clique {
            let s = *signatures.choose(rng).unwrap();
            for &u in &x {
                if s >> u & 1 == 1 {
                    edges.push((u, v));
                }
            }
        }
        next += size;
        left -= size;
    }
    (Graph::from_valid_edges(ell + rest, edges), x)
}

/// A clique plus a set `X` of at most `max_x` vertices (`X` first).
pub fn clique_plus_x(rng: &mut TestRng, max_n: usize, max_x: usize) -> (Graph, Vec<usize>) {
    let ell = rng.gen_range(0..=max_x.min(max_n.saturating_sub(1)));
    let c = rng.gen_range(1..=max_n - ell);
    let n = ell + c;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (v >= ell && u >= ell) || rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    (Graph::from_valid_edges(n, edges), (0..ell).collect())
}

/// A split graph: clique `0..c`, independent set `c..n`, random edges between.
pub fn split_graph(rng: &mut TestRng, n: usize, clique: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..clique {
        for v in u + 1..clique {
            edges.push((u, v));
        }
    }
    for w in clique..n {
        for u in 0..clique {
            if rng.gen_bool(p) {
                edges.push((u, w));
            }
        }
    }
    Graph::from_valid_edges(n, edges)
}

/// Intervals with integer and half-integer endpoints in `[0, span]`.
pub fn intervals(rng: &mut TestRng, n: usize, span: i64) -> Vec<(Rational, Rational)> {
    (0..n)
        .map(|_| {
            let lo = rng.gen_range(0..=2 * span);
            let len = rng.gen_range(0..=span);
            (Rational::new(lo, 2), Rational::new(lo + len, 2))
        })
        .collect()
}

/// A graph with at most `t` neighborhood types: a random type graph whose
/// classes are cliques or independent sets, blown up to `n` vertices.
pub fn nd_graph(rng: &mut TestRng, n: usize, t: usize) -> Graph {
    let t = t.clamp(1, n.max(1));
    let class: Vec<usize> = (0..n).map(|v| if v < t { v } else { rng.gen_range(0..t) }).collect();
    let clique: Vec<bool> = (0..t).map(|_| rng.gen_bool(0.5)).collect();
    let mut joined = vec![vec![false; t]; t];
    for i in 0..t {
        for j in i + 1..t {
            let b = rng.gen_bool(0.5);
            joined[i][j] = b;
            joined[j][i] = b;
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let (a, b) = (class[u], class[v]);
            if (a == b && clique[a]) || (a != b && joined[a][b]) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_valid_edges(n, edges)
}
