//! Learners for the feedback-graph game.
//!
//! A learner only ever sees [`FeedbackEvent`]s, which can only be built
//! from a graph's out-neighborhood, so it cannot read a loss the protocol
//! would hide from it.

mod baselines;
mod exp3g;
mod hedge;
mod presets;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::FeedbackGraph;
use crate::rng::GameRng;

pub use baselines::{FixedActionLearner, UniformLearner};
pub use exp3g::{importance_weighted_estimates, Exp3G, Exp3GParams, Timing};
pub use hedge::{hedge_second_order_bound, Hedge, HedgeLearner, SecondOrderBound};
pub use presets::{
    preset_loopless_clique, preset_strong, preset_uninformed, preset_weak, strong_rates,
    weak_rates, Preset,
};

/// When the round's feedback graph becomes known to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// One graph, known in advance.
    #[default]
    Fixed,
    /// `G_t` revealed before the action is drawn.
    Informed,
    /// `G_t` revealed after the action is drawn.
    Uninformed,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Fixed => "fixed",
            Mode::Informed => "informed",
            Mode::Uninformed => "uninformed",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Mode::Fixed),
            "informed" => Ok(Mode::Informed),
            "uninformed" => Ok(Mode::Uninformed),
            other => Err(Error::invalid(format!("unknown mode `{other}`"))),
        }
    }
}

/// What the player learns at the end of a round.
#[derive(Debug, Clone)]
pub struct FeedbackEvent {
    action: usize,
    observed: Vec<(usize, f64)>,
    revealed_graph: Option<Arc<FeedbackGraph>>,
}

impl FeedbackEvent {
    /// Feedback for playing `action` on `graph` against the full loss
    /// vector `losses`: exactly the losses of `N^out(action)`. With
    /// `reveal_graph` the graph itself is attached (uninformed model).
    pub fn observe(
        graph: &Arc<FeedbackGraph>,
        action: usize,
        losses: &[f64],
        reveal_graph: bool,
    ) -> Result<Self> {
        graph.check_vertex(action)?;
        if losses.len() != graph.num_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "{} losses for {} actions",
                losses.len(),
                graph.num_vertices()
            )));
        }
        let observed = graph
            .out_neighbors(action)
            .iter()
            .map(|&j| {
                let l = losses[j];
                if (0.0..=1.0).contains(&l) {
                    Ok((j, l))
                } else {
                    Err(Error::invalid(format!("loss {l} of action {j} outside [0, 1]")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            action,
            observed,
            revealed_graph: reveal_graph.then(|| Arc::clone(graph)),
        })
    }

    pub fn action(&self) -> usize {
        self.action
    }

    /// `(j, loss_j)` for every `j` in the out-neighborhood, ascending in `j`.
    pub fn observed(&self) -> &[(usize, f64)] {
        &self.observed
    }

    pub fn revealed_graph(&self) -> Option<&Arc<FeedbackGraph>> {
        self.revealed_graph.as_ref()
    }
}

/// A player in the repeated game.
pub trait Learner: Send {
    fn num_actions(&self) -> usize;

    /// Informed model: the graph of the coming round. Learners that do not
    /// use graphs ignore it.
    fn reveal_graph(&mut self, _graph: &Arc<FeedbackGraph>) -> Result<()> {
        Ok(())
    }

    fn act(&mut self, rng: &mut GameRng) -> Result<usize>;

    fn update(&mut self, event: &FeedbackEvent) -> Result<()>;
}

/// Max-shifted `softmax(-eta * cumulative)`.
pub(crate) fn exp_weights(cumulative: &[f64], eta: f64) -> Vec<f64> {
    let min = cumulative.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = cumulative.iter().map(|&c| (-eta * (c - min)).exp()).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{catalog, CatalogGraph};

    #[test]
    fn events_reveal_exactly_the_out_neighborhood() {
        let g = Arc::new(catalog(CatalogGraph::RevealingAction, 4).unwrap());
        let losses = [0.1, 0.2, 0.3, 0.4];
        let e = FeedbackEvent::observe(&g, 0, &losses, false).unwrap();
        assert_eq!(e.observed(), &[(0, 0.1), (1, 0.2), (2, 0.3), (3, 0.4)]);
        assert!(e.revealed_graph().is_none());
        let e = FeedbackEvent::observe(&g, 2, &losses, true).unwrap();
        assert!(e.observed().is_empty());
        assert!(e.revealed_graph().is_some());
    }

    #[test]
    fn events_validate_inputs() {
        let g = Arc::new(catalog(CatalogGraph::Bandit, 2).unwrap());
        assert!(FeedbackEvent::observe(&g, 2, &[0.0, 0.0], false).is_err());
        assert!(FeedbackEvent::observe(&g, 0, &[0.0], false).is_err());
        assert!(FeedbackEvent::observe(&g, 0, &[1.5, 0.0], false).is_err());
        // Unobserved out-of-range losses are never inspected.
        assert!(FeedbackEvent::observe(&g, 0, &[0.5, 7.0], false).is_ok());
    }

    #[test]
    fn exp_weights_survive_huge_losses() {
        let q = exp_weights(&[1e6, 1e6 + 1.0, 2e6], 1.0);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(q.iter().all(|x| x.is_finite() && *x >= 0.0));
        assert!(q[0] > q[1] && q[2] == 0.0);
    }

    #[test]
    fn modes_parse() {
        for m in [Mode::Fixed, Mode::Informed, Mode::Uninformed] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("sometimes".parse::<Mode>().is_err());
    }
}
