//! Independent subsets of a vertex set that no single vertex dominates
//! heavily.
//!
//! Given `W` whose minimum dominating set has size `k`, find `U ⊆ W` that
//! is independent, such that every vertex dominates at most `ln n` members
//! of `U`, and with `|U| >= k / (50 ln n)`. When `k >= 50 ln n` this follows the
//! probabilistic construction: shrink `W` to a set `R` that every vertex
//! dominates at most a `beta = 2 ln n / k` fraction of, sample
//! `m = floor(1/(10 beta))` elements with replacement, check the sample,
//! and extract an independent set greedily. Below that threshold the size
//! requirement is a single vertex and a greedy pass is used directly.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{min_dominating_set, FeedbackGraph};
use crate::rng::GameRng;

/// Sampling attempts before the greedy fallback.
pub const LEMMA3_MAX_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadIndependentSet {
    /// Ascending.
    pub set: Vec<usize>,
    /// Size of the minimum dominating set of `W` used for the bounds.
    pub dominating_size: usize,
    /// `max(1, floor(k / (50 ln n)))`.
    pub size_bound: usize,
    /// Maximum number of members any vertex may dominate.
    pub domination_cap: usize,
    /// Whether the sampling construction ran (`k >= 50 ln n`).
    pub sampled: bool,
    /// Set when sampling failed and the greedy fallback produced the result;
    /// the fallback keeps the domination cap but not the size bound.
    pub fallback: bool,
}

/// `max(1, floor(ln n))`: the largest integer count that is at most `ln n`,
/// kept at 1 so a singleton always qualifies.
pub fn domination_cap(num_vertices: usize) -> usize {
    ((num_vertices as f64).ln().floor() as usize).max(1)
}

pub fn lemma3_construct(
    g: &FeedbackGraph,
    targets: &[usize],
    rng: &mut GameRng,
) -> Result<SpreadIndependentSet> {
    let n = g.num_vertices();
    let mut w: Vec<usize> = targets.to_vec();
    w.sort_unstable();
    w.dedup();
    if w.is_empty() {
        return Err(Error::invalid("the target set W is empty"));
    }
    for &v in &w {
        g.check_vertex(v)?;
    }
    let dom = min_dominating_set(g, &w).ok_or_else(|| {
        Error::invalid("some vertex of W has no in-neighbor, so W cannot be dominated")
    })?;
    let k = dom.size;
    let ln_n = (n as f64).ln();
    let cap = domination_cap(n);
    let size_bound = ((k as f64 / (50.0 * ln_n)).floor() as usize).max(1);
    let mut out = SpreadIndependentSet {
        set: Vec::new(),
        dominating_size: k,
        size_bound,
        domination_cap: cap,
        sampled: false,
        fallback: false,
    };

    if (k as f64) < 50.0 * ln_n {
        out.set = greedy_spread_set(g, &w, cap);
        return Ok(out);
    }

    out.sampled = true;
    let beta = 2.0 * ln_n / k as f64;
    if let Some(r) = shrink(g, &w, beta) {
        let m = (1.0 / (10.0 * beta)).floor() as usize;
        for _ in 0..LEMMA3_MAX_RETRIES {
            let sample = sample_distinct(&r, m, rng);
            if !sample_passes(g, &sample, m, ln_n) {
                continue;
            }
            let u = greedy_independent(g, &sample);
            if u.len() >= size_bound && within_cap(g, &u, cap) {
                out.set = u;
                return Ok(out);
            }
        }
    }
    out.fallback = true;
    out.set = greedy_spread_set(g, &w, cap);
    Ok(out)
}

/// Repeatedly drop everything a heavy vertex dominates until no vertex
/// dominates more than a `beta` fraction of what is left. `None` if the
/// process empties the set, which happens only when `k` overestimates the
/// true domination number.
fn shrink(g: &FeedbackGraph, w: &[usize], beta: f64) -> Option<Vec<usize>> {
    let mut in_r = vec![false; g.num_vertices()];
    for &v in w {
        in_r[v] = true;
    }
    let mut size = w.len();
    loop {
        let heavy = (0..g.num_vertices()).find(|&v| {
            let hit = g.out_neighbors(v).iter().filter(|&&x| in_r[x]).count();
            hit as f64 > beta * size as f64
        });
        let Some(v) = heavy else { break };
        for &x in g.out_neighbors(v) {
            if in_r[x] {
                in_r[x] = false;
                size -= 1;
            }
        }
        if size == 0 {
            return None;
        }
    }
    Some((0..g.num_vertices()).filter(|&v| in_r[v]).collect())
}

fn sample_distinct(pool: &[usize], m: usize, rng: &mut GameRng) -> Vec<usize> {
    let mut picked: Vec<usize> = (0..m).map(|_| pool[rng.random_range(0..pool.len())]).collect();
    picked.sort_unstable();
    picked.dedup();
    picked
}

/// The three sample properties: enough distinct elements, no vertex
/// dominating more than `ln n` of them, average induced out-degree at most
/// one half.
fn sample_passes(g: &FeedbackGraph, s: &[usize], m: usize, ln_n: f64) -> bool {
    if s.is_empty() || (s.len() as f64) < m as f64 / 10.0 {
        return false;
    }
    let mut member = vec![false; g.num_vertices()];
    for &v in s {
        member[v] = true;
    }
    let hits = |v: usize| g.out_neighbors(v).iter().filter(|&&x| member[x]).count();
    if (0..g.num_vertices()).any(|v| hits(v) as f64 > ln_n) {
        return false;
    }
    let avg = s.iter().map(|&v| hits(v)).sum::<usize>() as f64 / s.len() as f64;
    avg <= 0.5
}

/// Minimum-degree greedy on the undirected graph induced by `s`.
fn greedy_independent(g: &FeedbackGraph, s: &[usize]) -> Vec<usize> {
    let mut alive: Vec<usize> = s.to_vec();
    let mut chosen = Vec::new();
    let adjacent = |a: usize, b: usize| a != b && (g.has_edge(a, b) || g.has_edge(b, a));
    while !alive.is_empty() {
        let &pick = alive
            .iter()
            .min_by_key(|&&v| (alive.iter().filter(|&&u| adjacent(u, v)).count(), v))
            .expect("non-empty");
        chosen.push(pick);
        alive.retain(|&u| u != pick && !adjacent(u, pick));
    }
    chosen.sort_unstable();
    chosen
}

/// Scans `w` in ascending order, keeping a vertex when the set stays
/// independent and within the domination cap.
fn greedy_spread_set(g: &FeedbackGraph, w: &[usize], cap: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut load = vec![0usize; g.num_vertices()];
    for &v in w {
        let independent = chosen
            .iter()
            .all(|&u| !g.has_edge(u, v) && !g.has_edge(v, u));
        let fits = g.in_neighbors(v).iter().all(|&d| load[d] < cap);
        if independent && fits {
            for &d in g.in_neighbors(v) {
                load[d] += 1;
            }
            chosen.push(v);
        }
    }
    chosen
}

fn within_cap(g: &FeedbackGraph, u: &[usize], cap: usize) -> bool {
    let mut member = vec![false; g.num_vertices()];
    for &v in u {
        member[v] = true;
    }
    (0..g.num_vertices())
        .all(|v| g.out_neighbors(v).iter().filter(|&&x| member[x]).count() <= cap)
}

/// Independent (no edge between distinct members, either direction) and
/// every vertex dominating at most `cap` members.
pub fn is_spread_independent(g: &FeedbackGraph, u: &[usize], cap: usize) -> bool {
    let independent = u.iter().enumerate().all(|(a, &x)| {
        u[a + 1..]
            .iter()
            .all(|&y| x == y || (!g.has_edge(x, y) && !g.has_edge(y, x)))
    });
    independent && within_cap(g, u, cap)
}
