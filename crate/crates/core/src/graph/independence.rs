//! Maximum independent set by branch and bound.
//!
//! Two distinct vertices conflict when an edge joins them in either
//! direction, so the search runs on the symmetrized simple graph. Self-loops
//! never matter.

use super::{vertices_of, FeedbackGraph, Mask};
use crate::error::{Error, Result};

pub const EXACT_INDEPENDENCE_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    pub size: usize,
    /// Lexicographically smallest maximum independent set, ascending.
    pub witness: Vec<usize>,
}

pub fn independence_number(g: &FeedbackGraph) -> Result<IndependentSet> {
    let n = g.num_vertices();
    if n > EXACT_INDEPENDENCE_CAP {
        return Err(Error::TooLarge {
            what: "independence number",
            num_vertices: n,
            cap: EXACT_INDEPENDENCE_CAP,
        });
    }
    let nbr = symmetric_neighbors(g);
    let all: Mask = if n == 64 { !0 } else { (1 << n) - 1 };
    let alpha = max_independent(&nbr, all, 0);

    // Fix vertices in ascending order, keeping each one whenever an
    // optimum that contains it still exists.
    let mut cand = all;
    let mut need = alpha;
    let mut witness = Vec::with_capacity(alpha);
    for v in 0..n {
        if need == 0 {
            break;
        }
        let bit = 1 << v;
        if cand & bit == 0 {
            continue;
        }
        let above = !((bit << 1) - 1);
        let rest = cand & !nbr[v] & above;
        if reaches(&nbr, rest, need - 1) {
            witness.push(v);
            need -= 1;
            cand = rest;
        } else {
            cand &= !bit;
        }
    }
    debug_assert_eq!(witness.len(), alpha);
    Ok(IndependentSet {
        size: alpha,
        witness,
    })
}

pub(crate) fn symmetric_neighbors(g: &FeedbackGraph) -> Vec<Mask> {
    let n = g.num_vertices();
    let mut nbr = vec![0 as Mask; n];
    for (u, v) in g.edges() {
        if u != v {
            nbr[u] |= 1 << v;
            nbr[v] |= 1 << u;
        }
    }
    nbr
}

fn max_independent(nbr: &[Mask], cand: Mask, floor: usize) -> usize {
    let mut best = floor;
    search(nbr, cand, 0, &mut best);
    best
}

/// Whether `cand` holds an independent set of size `target`.
fn reaches(nbr: &[Mask], cand: Mask, target: usize) -> bool {
    target == 0 || max_independent(nbr, cand, target - 1) >= target
}

fn search(nbr: &[Mask], mut cand: Mask, mut size: usize, best: &mut usize) {
    // Vertices of degree <= 1 inside `cand` belong to some optimum.
    loop {
        let mut changed = false;
        let mut scan = cand;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            if cand & (1 << v) == 0 {
                continue;
            }
            let local = nbr[v] & cand;
            if local.count_ones() <= 1 {
                size += 1;
                cand &= !(local | (1 << v));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + clique_cover_bound(nbr, cand) <= *best {
        return;
    }

    let pivot = vertices_of(cand)
        .into_iter()
        .max_by_key(|&v| ((nbr[v] & cand).count_ones(), std::cmp::Reverse(v)))
        .expect("cand non-empty");
    let bit = 1 << pivot;
    search(nbr, cand & !nbr[pivot] & !bit, size + 1, best);
    search(nbr, cand & !bit, size, best);
}

/// Greedy partition of `cand` into cliques; an independent set takes at
/// most one vertex per clique.
fn clique_cover_bound(nbr: &[Mask], mut cand: Mask) -> usize {
    let mut cliques = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= !(1 << v);
        let mut common = nbr[v] & cand;
        while common != 0 {
            let u = common.trailing_zeros() as usize;
            cand &= !(1 << u);
            common &= nbr[u] & !(1 << u);
        }
        cliques += 1;
    }
    cliques
}
