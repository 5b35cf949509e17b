use super::{FeedbackEvent, Learner};
use crate::error::{Error, Result};
use crate::rng::{sample_index, GameRng};

/// Plays uniformly at random and ignores feedback.
#[derive(Debug, Clone)]
pub struct UniformLearner {
    probs: Vec<f64>,
}

impl UniformLearner {
    pub fn new(num_actions: usize) -> Result<Self> {
        if num_actions == 0 {
            return Err(Error::invalid("need at least one action"));
        }
        Ok(Self {
            probs: vec![1.0 / num_actions as f64; num_actions],
        })
    }
}

impl Learner for UniformLearner {
    fn num_actions(&self) -> usize {
        self.probs.len()
    }

    fn act(&mut self, rng: &mut GameRng) -> Result<usize> {
        Ok(sample_index(&self.probs, rng))
    }

    fn update(&mut self, _event: &FeedbackEvent) -> Result<()> {
        Ok(())
    }
}

/// Always plays the same action.
#[derive(Debug, Clone)]
pub struct FixedActionLearner {
    num_actions: usize,
    action: usize,
}

impl FixedActionLearner {
    pub fn new(num_actions: usize, action: usize) -> Result<Self> {
        if action >= num_actions {
            return Err(Error::VertexOutOfRange {
                vertex: action,
                num_vertices: num_actions,
            });
        }
        Ok(Self {
            num_actions,
            action,
        })
    }
}

impl Learner for FixedActionLearner {
    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn act(&mut self, _rng: &mut GameRng) -> Result<usize> {
        Ok(self.action)
    }

    fn update(&mut self, _event: &FeedbackEvent) -> Result<()> {
        Ok(())
    }
}
