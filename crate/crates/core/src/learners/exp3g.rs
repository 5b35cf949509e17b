//! Exp3.G: exponential weights on importance-weighted graph estimates,
//! mixed with uniform exploration over a set `U`.
//!
//! The sampling distribution is `p_t = (1 - gamma) q_t + gamma u`, where `q_t`
//! is exponential weights over cumulative estimates and `u` is uniform on
//! `U`. After playing `I_t` the estimate of every revealed action `i` is
//! `l_t(i) / P_t(i)` with `P_t(i) = sum_{j in N^in(i)} p_t(j)`; all other
//! estimates are zero.

use std::sync::Arc;

use super::{exp_weights, FeedbackEvent, Learner, Mode};
use crate::error::{Error, Result};
use crate::graph::{weak_domination_number, FeedbackGraph};
use crate::rng::{sample_index, GameRng};

#[derive(Debug, Clone, PartialEq)]
pub struct Exp3GParams {
    pub eta: f64,
    pub gamma: f64,
    /// Exploration set `U`, 0-based. Ignored in the informed model, where it
    /// is recomputed from every round's graph.
    pub explore: Vec<usize>,
}

/// When [`Exp3G::set_round_graph`] is called relative to the action draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    BeforeAction,
    AfterAction,
}

#[derive(Debug, Clone)]
pub struct Exp3G {
    num_actions: usize,
    eta: f64,
    gamma: f64,
    mode: Mode,
    explore: Vec<usize>,
    /// Fixed mode: the graph. Informed: this round's graph once revealed.
    /// Uninformed: this round's graph once revealed after acting.
    graph: Option<Arc<FeedbackGraph>>,
    cumulative: Vec<f64>,
    q: Vec<f64>,
    p: Vec<f64>,
    round: usize,
    pending_action: Option<usize>,
}

impl Exp3G {
    /// Exp3.G on a single graph known in advance.
    pub fn fixed(graph: Arc<FeedbackGraph>, params: Exp3GParams) -> Result<Self> {
        let k = graph.num_vertices();
        Self::build(k, params, Mode::Fixed, Some(graph))
    }

    /// Exp3.G for time-varying graphs. In the informed model the exploration
    /// set becomes the smallest weakly dominating set of each revealed graph;
    /// in the uninformed model it stays `params.explore` (normally `V`).
    pub fn time_varying(num_actions: usize, params: Exp3GParams, mode: Mode) -> Result<Self> {
        if mode == Mode::Fixed {
            return Err(Error::invalid("use Exp3G::fixed for a fixed graph"));
        }
        Self::build(num_actions, params, mode, None)
    }

    fn build(
        num_actions: usize,
        params: Exp3GParams,
        mode: Mode,
        graph: Option<Arc<FeedbackGraph>>,
    ) -> Result<Self> {
        let Exp3GParams { eta, gamma, mut explore } = params;
        if num_actions == 0 {
            return Err(Error::invalid("Exp3.G needs at least one action"));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::invalid(format!("learning rate {eta} must be positive")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid(format!("exploration rate {gamma} outside [0, 1]")));
        }
        explore.sort_unstable();
        explore.dedup();
        if let Some(&v) = explore.iter().find(|&&v| v >= num_actions) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                num_vertices: num_actions,
            });
        }
        if mode == Mode::Informed {
            explore.clear();
        } else if explore.is_empty() && gamma > 0.0 {
            return Err(Error::invalid("exploration set is empty but gamma > 0"));
        }
        let q = vec![1.0 / num_actions as f64; num_actions];
        let mut learner = Self {
            num_actions,
            eta,
            gamma,
            mode,
            explore,
            graph,
            cumulative: vec![0.0; num_actions],
            p: q.clone(),
            q,
            round: 0,
            pending_action: None,
        };
        learner.recompute_p();
        Ok(learner)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn exploration_set(&self) -> &[usize] {
        &self.explore
    }

    /// Exponential-weights distribution `q_t`.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Sampling distribution `p_t`.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn cumulative_estimates(&self) -> &[f64] {
        &self.cumulative
    }

    /// Supplies the round's graph: before acting in the informed model,
    /// after acting in the uninformed model.
    pub fn set_round_graph(&mut self, graph: Arc<FeedbackGraph>, when: Timing) -> Result<()> {
        if graph.num_vertices() != self.num_actions {
            return Err(Error::DimensionMismatch(format!(
                "graph has {} vertices, learner has {} actions",
                graph.num_vertices(),
                self.num_actions
            )));
        }
        match (self.mode, when) {
            (Mode::Informed, Timing::BeforeAction) if self.pending_action.is_none() => {
                let dom = weak_domination_number(&graph);
                self.explore = if dom.witness.is_empty() {
                    (0..self.num_actions).collect()
                } else {
                    dom.witness
                };
                self.graph = Some(graph);
                self.recompute_p();
                Ok(())
            }
            (Mode::Uninformed, Timing::AfterAction) if self.pending_action.is_some() => {
                self.graph = Some(graph);
                Ok(())
            }
            (mode, when) => Err(Error::Protocol(format!(
                "cannot supply a graph {when:?} in {mode} mode at this point of the round"
            ))),
        }
    }

    /// Draws `I_t ~ p_t` by inverse CDF with one uniform.
    pub fn act(&mut self, rng: &mut GameRng) -> Result<usize> {
        if self.pending_action.is_some() {
            return Err(Error::Protocol("act called twice without an update".into()));
        }
        if self.mode == Mode::Informed && self.graph.is_none() {
            return Err(Error::Protocol(
                "informed mode: the round's graph must be revealed before acting".into(),
            ));
        }
        let action = sample_index(&self.p, rng);
        self.pending_action = Some(action);
        Ok(action)
    }

    /// Builds the loss estimates from `event` and applies the
    /// exponential-weights update.
    pub fn update(&mut self, event: &FeedbackEvent) -> Result<()> {
        let Some(action) = self.pending_action else {
            return Err(Error::Protocol("update without a preceding action".into()));
        };
        if event.action() != action {
            return Err(Error::Protocol(format!(
                "feedback for action {} but action {action} was played",
                event.action()
            )));
        }
        if self.mode == Mode::Uninformed {
            if let Some(g) = event.revealed_graph() {
                self.set_round_graph(Arc::clone(g), Timing::AfterAction)?;
            }
        }
        let graph = self
            .graph
            .clone()
            .ok_or_else(|| Error::Protocol("no graph for this round".into()))?;
        let estimates = importance_weighted_estimates(&graph, &self.p, event)?;
        self.apply_estimates(&estimates)?;
        self.pending_action = None;
        if self.mode != Mode::Fixed {
            self.graph = None;
        }
        Ok(())
    }

    /// Adds one round of loss estimates and refreshes `q` and `p`.
    pub fn apply_estimates(&mut self, estimates: &[f64]) -> Result<()> {
        if estimates.len() != self.num_actions {
            return Err(Error::DimensionMismatch(format!(
                "{} estimates for {} actions",
                estimates.len(),
                self.num_actions
            )));
        }
        if let Some(e) = estimates.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
            return Err(Error::invalid(format!("loss estimate {e} must be non-negative")));
        }
        for (c, e) in self.cumulative.iter_mut().zip(estimates) {
            *c += e;
        }
        self.q = exp_weights(&self.cumulative, self.eta);
        self.round += 1;
        self.recompute_p();
        Ok(())
    }

    fn recompute_p(&mut self) {
        let mix = if self.explore.is_empty() {
            0.0
        } else {
            self.gamma
        };
        self.p = self.q.iter().map(|&q| (1.0 - mix) * q).collect();
        if mix > 0.0 {
            let share = mix / self.explore.len() as f64;
            for &i in &self.explore {
                self.p[i] += share;
            }
        }
    }
}

impl Learner for Exp3G {
    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn reveal_graph(&mut self, graph: &Arc<FeedbackGraph>) -> Result<()> {
        match self.mode {
            Mode::Informed => self.set_round_graph(Arc::clone(graph), Timing::BeforeAction),
            _ => Err(Error::Protocol(format!(
                "graph revealed before acting in {} mode",
                self.mode
            ))),
        }
    }

    fn act(&mut self, rng: &mut GameRng) -> Result<usize> {
        Exp3G::act(self, rng)
    }

    fn update(&mut self, event: &FeedbackEvent) -> Result<()> {
        Exp3G::update(self, event)
    }
}

/// `l_t(i) / P_t(i)` for every revealed `i`, zero elsewhere. Unrevealed
/// entries never evaluate the quotient.
pub fn importance_weighted_estimates(
    graph: &FeedbackGraph,
    p: &[f64],
    event: &FeedbackEvent,
) -> Result<Vec<f64>> {
    let k = graph.num_vertices();
    if p.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "distribution over {} actions for a {k}-vertex graph",
            p.len()
        )));
    }
    let outs = graph.out_neighbors(event.action());
    if outs.len() != event.observed().len()
        || outs.iter().zip(event.observed()).any(|(&j, &(o, _))| j != o)
    {
        return Err(Error::Protocol(format!(
            "observed set of action {} does not match its out-neighborhood",
            event.action()
        )));
    }
    let mut estimates = vec![0.0; k];
    for &(i, loss) in event.observed() {
        let prob: f64 = graph.in_neighbors(i).iter().map(|&j| p[j]).sum();
        if prob <= 0.0 {
            return Err(Error::Protocol(format!(
                "action {i} was observed but has observation probability {prob}"
            )));
        }
        estimates[i] = loss / prob;
    }
    Ok(estimates)
}
