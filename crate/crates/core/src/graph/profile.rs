use std::fmt;

use super::{
    independence_number, weak_domination_number, FeedbackGraph, Observability, VertexTag,
};
use crate::error::{Error, Result};

/// Everything the learners and the rate prediction need to know about a
/// graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphProfile {
    pub num_vertices: usize,
    pub class: Observability,
    pub tags: Vec<VertexTag>,
    pub alpha: usize,
    pub alpha_witness: Vec<usize>,
    /// `None` for non-observable graphs, where weak domination is undefined.
    pub delta: Option<usize>,
    pub delta_witness: Vec<usize>,
    pub delta_exact: bool,
    pub weak_set: Vec<usize>,
}

pub fn profile(g: &FeedbackGraph) -> Result<GraphProfile> {
    let class = g.classify();
    let alpha = independence_number(g)?;
    let dom = weak_domination_number(g);
    let observable = class.is_observable();
    Ok(GraphProfile {
        num_vertices: g.num_vertices(),
        class,
        tags: g.vertex_tags(),
        alpha: alpha.size,
        alpha_witness: alpha.witness,
        delta: observable.then_some(dom.size),
        delta_witness: if observable { dom.witness } else { Vec::new() },
        delta_exact: dom.exact,
        weak_set: g.weak_set(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateClass {
    /// `alpha^{1/2} T^{1/2}`
    SquareRoot,
    /// `delta^{1/3} T^{2/3}`
    TwoThirds,
    /// `T`
    Linear,
}

impl RateClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RateClass::SquareRoot => "sqrt",
            RateClass::TwoThirds => "two_thirds",
            RateClass::Linear => "linear",
        }
    }
}

impl fmt::Display for RateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Minimax regret order up to constants and log factors.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePrediction {
    pub class: RateClass,
    pub formula: String,
    pub value: f64,
}

pub fn predict_rate(profile: &GraphProfile, horizon: u64) -> Result<RatePrediction> {
    if profile.num_vertices < 2 {
        return Err(Error::invalid("rate prediction needs at least two actions"));
    }
    let t = horizon as f64;
    let pred = match profile.class {
        Observability::StronglyObservable => RatePrediction {
            class: RateClass::SquareRoot,
            formula: "alpha^(1/2) * T^(1/2)".into(),
            value: (profile.alpha as f64 * t).sqrt(),
        },
        Observability::WeaklyObservable => {
            let delta = profile.delta.expect("observable graphs carry delta") as f64;
            RatePrediction {
                class: RateClass::TwoThirds,
                formula: "delta^(1/3) * T^(2/3)".into(),
                value: delta.cbrt() * t.powf(2.0 / 3.0),
            }
        }
        Observability::NotObservable => RatePrediction {
            class: RateClass::Linear,
            formula: "T".into(),
            value: t,
        },
    };
    Ok(pred)
}

/// `sum_i w_i / (w_i + sum_{j in N^in(i)} w_j)`.
///
/// Requires positive weights summing to at most one, each at least `eps`,
/// with `0 < eps < 1/2`.
pub fn lemma2_lhs(g: &FeedbackGraph, weights: &[f64], eps: f64) -> Result<f64> {
    if weights.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} vertices",
            weights.len(),
            g.num_vertices()
        )));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!("eps = {eps} outside (0, 1/2)")));
    }
    if let Some(w) = weights.iter().find(|&&w| !(w >= eps)) {
        return Err(Error::invalid(format!("weight {w} below eps = {eps}")));
    }
    let total: f64 = weights.iter().sum();
    if total > 1.0 + 1e-12 {
        return Err(Error::invalid(format!("weights sum to {total} > 1")));
    }
    Ok((0..g.num_vertices())
        .map(|i| {
            let incoming: f64 = g.in_neighbors(i).iter().map(|&j| weights[j]).sum();
            weights[i] / (weights[i] + incoming)
        })
        .sum())
}

/// `4 alpha ln(4K / (alpha eps))`.
pub fn lemma2_bound(alpha: usize, num_vertices: usize, eps: f64) -> f64 {
    let a = alpha as f64;
    4.0 * a * (4.0 * num_vertices as f64 / (a * eps)).ln()
}
