//! Smallest vertex sets dominating the weakly observable vertices.

use super::{mask_of, FeedbackGraph, Mask};

/// Largest graph for which the exact subset enumeration is attempted.
pub const EXACT_DOMINATION_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatingSet {
    pub size: usize,
    /// Ascending. Lexicographically smallest optimum when `exact`.
    pub witness: Vec<usize>,
    /// `false` when produced by the greedy fallback.
    pub exact: bool,
}

/// `delta(G)` with a witness. Exact up to [`EXACT_DOMINATION_CAP`]
/// vertices, greedy (and flagged) above. An empty weak set gives 0.
pub fn weak_domination_number(g: &FeedbackGraph) -> DominatingSet {
    min_dominating_set(g, &g.weak_set()).expect("weak vertices have in-neighbors")
}

/// Minimum weakly dominating set by enumerating subsets in order of size.
/// Returns `None` above the cap.
pub fn exact_weak_dominating_set(g: &FeedbackGraph) -> Option<DominatingSet> {
    exact_dominating_set(g, &g.weak_set())
}

/// Greedy set cover of the weak set.
pub fn greedy_weak_dominating_set(g: &FeedbackGraph) -> DominatingSet {
    greedy_dominating_set(g, &g.weak_set()).expect("weak vertices have in-neighbors")
}

/// Smallest set `D` with every target in `N^out(D)`: exact up to the cap,
/// greedy above. `None` if some target has no in-neighbor.
pub fn min_dominating_set(g: &FeedbackGraph, targets: &[usize]) -> Option<DominatingSet> {
    if g.num_vertices() <= EXACT_DOMINATION_CAP {
        exact_dominating_set(g, targets)
    } else {
        greedy_dominating_set(g, targets)
    }
}

fn exact_dominating_set(g: &FeedbackGraph, targets: &[usize]) -> Option<DominatingSet> {
    if g.num_vertices() > EXACT_DOMINATION_CAP
        || targets.iter().any(|&w| g.in_neighbors(w).is_empty())
    {
        return None;
    }
    let target = mask_of(targets);
    if target == 0 {
        return Some(DominatingSet {
            size: 0,
            witness: Vec::new(),
            exact: true,
        });
    }
    let cover = cover_masks(g, target);
    // A minimum set never contains a vertex that covers no target.
    let useful: Vec<usize> = (0..g.num_vertices()).filter(|&v| cover[v] != 0).collect();
    (1..=useful.len()).find_map(|size| {
        first_cover_of_size(&useful, &cover, target, size).map(|pick| DominatingSet {
            size,
            witness: pick,
            exact: true,
        })
    })
}

/// Greedy set cover: repeatedly take the vertex covering the most
/// still-undominated targets, lowest id on ties.
fn greedy_dominating_set(g: &FeedbackGraph, targets: &[usize]) -> Option<DominatingSet> {
    if targets.iter().any(|&w| g.in_neighbors(w).is_empty()) {
        return None;
    }
    let mut remaining: Vec<bool> = vec![false; g.num_vertices()];
    for &w in targets {
        remaining[w] = true;
    }
    let mut left = remaining.iter().filter(|&&r| r).count();
    let mut witness = Vec::new();
    while left > 0 {
        let (best, gain) = (0..g.num_vertices())
            .map(|v| {
                let gain = g.out_neighbors(v).iter().filter(|&&w| remaining[w]).count();
                (v, gain)
            })
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        debug_assert!(gain > 0);
        for &w in g.out_neighbors(best) {
            if remaining[w] {
                remaining[w] = false;
                left -= 1;
            }
        }
        witness.push(best);
    }
    witness.sort_unstable();
    Some(DominatingSet {
        size: witness.len(),
        witness,
        exact: false,
    })
}

fn cover_masks(g: &FeedbackGraph, target: Mask) -> Vec<Mask> {
    (0..g.num_vertices())
        .map(|v| mask_of(g.out_neighbors(v)) & target)
        .collect()
}

/// Lexicographically first `size`-combination of `pool` whose covers union
/// to `target`.
fn first_cover_of_size(pool: &[usize], cover: &[Mask], target: Mask, size: usize) -> Option<Vec<usize>> {
    fn rec(
        pool: &[usize],
        cover: &[Mask],
        target: Mask,
        start: usize,
        left: usize,
        acc: Mask,
        pick: &mut Vec<usize>,
    ) -> bool {
        if left == 0 {
            return acc == target;
        }
        for idx in start..=pool.len() - left {
            let v = pool[idx];
            pick.push(v);
            if rec(pool, cover, target, idx + 1, left - 1, acc | cover[v], pick) {
                return true;
            }
            pick.pop();
        }
        false
    }
    let mut pick = Vec::with_capacity(size);
    rec(pool, cover, target, 0, size, 0, &mut pick).then_some(pick)
}

/// Whether `set` dominates every weakly observable vertex of `g`.
pub fn dominates_weak_set(g: &FeedbackGraph, set: &[usize]) -> bool {
    let mut covered = vec![false; g.num_vertices()];
    for &d in set {
        for &w in g.out_neighbors(d) {
            covered[w] = true;
        }
    }
    g.weak_set().into_iter().all(|w| covered[w])
}
