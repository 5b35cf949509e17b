use super::{exp_weights, FeedbackEvent, Learner};
use crate::error::{Error, Result};
use crate::rng::{sample_index, GameRng};

/// Exponential weights over cumulative losses.
#[derive(Debug, Clone)]
pub struct Hedge {
    eta: f64,
    cumulative: Vec<f64>,
    round: usize,
}

impl Hedge {
    pub fn new(num_actions: usize, eta: f64) -> Result<Self> {
        if num_actions == 0 {
            return Err(Error::invalid("hedge needs at least one action"));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::invalid(format!("learning rate {eta} must be positive")));
        }
        Ok(Self {
            eta,
            cumulative: vec![0.0; num_actions],
            round: 0,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Rounds processed so far.
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn cumulative_losses(&self) -> &[f64] {
        &self.cumulative
    }

    /// `q_t` for the upcoming round.
    pub fn distribution(&self) -> Vec<f64> {
        exp_weights(&self.cumulative, self.eta)
    }

    /// Absorbs one loss vector and returns the next distribution.
    pub fn step(&mut self, losses: &[f64]) -> Result<Vec<f64>> {
        if losses.len() != self.cumulative.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} losses for {} actions",
                losses.len(),
                self.cumulative.len()
            )));
        }
        if let Some(l) = losses.iter().find(|l| !(**l >= 0.0) || !l.is_finite()) {
            return Err(Error::invalid(format!("hedge losses must be non-negative, got {l}")));
        }
        for (c, l) in self.cumulative.iter_mut().zip(losses) {
            *c += l;
        }
        self.round += 1;
        Ok(self.distribution())
    }
}

/// Both sides of the refined second-order bound, plus the right-hand side
/// of the standard bound (all sets empty).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderBound {
    pub lhs: f64,
    pub rhs: f64,
    pub standard_rhs: f64,
}

/// Runs Hedge on `losses` and evaluates
/// `sum_t <q_t, l_t> - sum_t l_t(i*)` against
/// `ln K / eta + eta sum_t (sum_{S_t} q(1-q) l^2 + sum_{not S_t} q l^2)`.
///
/// Every `i` in `subsets[t]` must satisfy `losses[t][i] <= 1 / eta`.
pub fn hedge_second_order_bound(
    losses: &[Vec<f64>],
    subsets: &[Vec<usize>],
    eta: f64,
    comparator: usize,
) -> Result<SecondOrderBound> {
    let k = losses.first().map_or(0, Vec::len);
    if k == 0 {
        return Err(Error::invalid("need at least one round with one action"));
    }
    if subsets.len() != losses.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} subsets for {} rounds",
            subsets.len(),
            losses.len()
        )));
    }
    if comparator >= k {
        return Err(Error::VertexOutOfRange {
            vertex: comparator,
            num_vertices: k,
        });
    }
    let mut hedge = Hedge::new(k, eta)?;
    let (mut player, mut best, mut refined, mut standard) = (0.0, 0.0, 0.0, 0.0);
    for (t, (row, subset)) in losses.iter().zip(subsets).enumerate() {
        let mut in_subset = vec![false; k];
        for &i in subset {
            if i >= k {
                return Err(Error::VertexOutOfRange {
                    vertex: i,
                    num_vertices: k,
                });
            }
            if row[i] > 1.0 / eta {
                return Err(Error::invalid(format!(
                    "round {t}: loss {} of action {i} exceeds 1/eta",
                    row[i]
                )));
            }
            in_subset[i] = true;
        }
        let q = hedge.distribution();
        for i in 0..k {
            let l = row[i];
            let second = q[i] * l * l;
            player += q[i] * l;
            standard += second;
            refined += if in_subset[i] { (1.0 - q[i]) * second } else { second };
        }
        best += row[comparator];
        hedge.step(row)?;
    }
    let base = (k as f64).ln() / eta;
    Ok(SecondOrderBound {
        lhs: player - best,
        rhs: base + eta * refined,
        standard_rhs: base + eta * standard,
    })
}

/// Hedge as a player. Needs the whole loss vector every round, so it is
/// only usable on graphs where every action reveals everything.
#[derive(Debug, Clone)]
pub struct HedgeLearner {
    hedge: Hedge,
}

impl HedgeLearner {
    pub fn new(num_actions: usize, eta: f64) -> Result<Self> {
        Ok(Self {
            hedge: Hedge::new(num_actions, eta)?,
        })
    }

    pub fn hedge(&self) -> &Hedge {
        &self.hedge
    }
}

impl Learner for HedgeLearner {
    fn num_actions(&self) -> usize {
        self.hedge.cumulative.len()
    }

    fn act(&mut self, rng: &mut GameRng) -> Result<usize> {
        Ok(sample_index(&self.hedge.distribution(), rng))
    }

    fn update(&mut self, event: &FeedbackEvent) -> Result<()> {
        let k = self.num_actions();
        if event.observed().len() != k {
            return Err(Error::Protocol(format!(
                "hedge needs full information, action {} revealed {} of {k} losses",
                event.action(),
                event.observed().len()
            )));
        }
        let losses: Vec<f64> = event.observed().iter().map(|&(_, l)| l).collect();
        self.hedge.step(&losses)?;
        Ok(())
    }
}
