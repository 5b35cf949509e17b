//! Brute-force oracles and random instances shared by the integration tests.
#![allow(dead_code)]

use graphbandit::graph::FeedbackGraph;
use rand::Rng;

/// Random digraph: each ordered pair `u != v` is an edge with probability
/// `density`, each self-loop with probability `loops`.
pub fn random_graph<R: Rng>(rng: &mut R, k: usize, density: f64, loops: f64) -> FeedbackGraph {
    let mut edges = Vec::new();
    for u in 0..k {
        for v in 0..k {
            let p = if u == v { loops } else { density };
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    FeedbackGraph::from_edges(k, edges).unwrap()
}

/// `K` vertices; vertex 1 has no in-edges, the others form a clique with
/// self-loops.
pub fn blind_first(k: usize) -> FeedbackGraph {
    let edges = (1..k).flat_map(|u| (1..k).map(move |v| (u, v)));
    FeedbackGraph::from_edges(k, edges).unwrap()
}

/// Largest set with no edge in either direction between distinct members.
pub fn brute_alpha(g: &FeedbackGraph) -> usize {
    let k = g.num_vertices();
    (0u32..1 << k)
        .filter(|&mask| {
            (0..k).all(|u| {
                (0..k).all(|v| {
                    u == v
                        || mask & (1 << u) == 0
                        || mask & (1 << v) == 0
                        || !g.has_edge(u, v)
                })
            })
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Smallest `D` with every weakly observable vertex in `N^out(D)`; `None`
/// when some weak vertex cannot be dominated.
pub fn brute_delta(g: &FeedbackGraph) -> Option<usize> {
    let k = g.num_vertices();
    let weak = g.weak_set();
    (0u32..1 << k)
        .filter(|&mask| {
            weak.iter()
                .all(|&w| (0..k).any(|d| mask & (1 << d) != 0 && g.has_edge(d, w)))
        })
        .map(u32::count_ones)
        .min()
        .map(|m| m as usize)
}

/// No edge between distinct members, and no vertex with more than `cap`
/// out-neighbors in `u`.
pub fn brute_spread_check(g: &FeedbackGraph, u: &[usize], cap: usize) -> bool {
    let k = g.num_vertices();
    let independent = u
        .iter()
        .all(|&a| u.iter().all(|&b| a == b || !g.has_edge(a, b)));
    let capped = (0..k).all(|v| u.iter().filter(|&&x| g.has_edge(v, x)).count() <= cap);
    independent && capped
}
