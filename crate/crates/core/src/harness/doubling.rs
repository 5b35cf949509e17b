use std::collections::HashMap;

use super::{check_dimensions, play_rounds, GameTranscript, GraphSource};
use crate::environments::Environment;
use crate::error::{Error, Result};
use crate::graph::{independence_number, weak_domination_number, Observability};
use crate::learners::{strong_rates, weak_rates, Exp3G, Exp3GParams, Mode};
use crate::rng::{stream_rng, PLAYER_STREAM};

/// 0-based first rounds of the epochs covering `horizon` rounds: epoch `e`
/// starts at round `2^e` (1-based) and lasts `2^e` rounds, the last one cut
/// at the horizon.
pub fn epoch_starts(horizon: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |&s| s.checked_mul(2))
        .take_while(|&s| s <= horizon)
        .map(|s| s - 1)
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct GraphStats {
    class: Observability,
    alpha: usize,
    delta: usize,
}

/// Informed Exp3.G restarted at every epoch of [`epoch_starts`]. Each
/// epoch is tuned to its length using the running average of `alpha_t`
/// (every graph so far strongly observable) or of `max(delta_t, 1)`
/// (otherwise) over the rounds up to and including the epoch's first round.
/// Accounting runs continuously across epochs and the player stream is
/// never reseeded.
pub fn doubling_wrapper(
    source: &GraphSource,
    env: &Environment,
    seed: u64,
) -> Result<GameTranscript> {
    if source.is_fixed() {
        return Err(Error::invalid(
            "the doubling wrapper plays time-varying graphs in the informed model",
        ));
    }
    let k = source.num_vertices();
    check_dimensions(source, k, env)?;
    let horizon = env.horizon();
    let mut cache: HashMap<u64, GraphStats> = HashMap::new();
    let mut stats_at = |t: usize| -> Result<GraphStats> {
        let g = source.graph(t);
        let key = g.fingerprint();
        if let Some(s) = cache.get(&key) {
            return Ok(*s);
        }
        let class = g.classify();
        if class == Observability::NotObservable {
            return Err(Error::WrongClass(format!(
                "graph of round {} is not observable",
                t + 1
            )));
        }
        let s = GraphStats {
            class,
            alpha: independence_number(g)?.size,
            delta: weak_domination_number(g).size,
        };
        cache.insert(key, s);
        Ok(s)
    };

    let mut rng = stream_rng(seed, PLAYER_STREAM);
    let mut transcript = GameTranscript::new(seed, env);
    let (mut sum_alpha, mut sum_delta, mut all_strong) = (0usize, 0usize, true);
    let mut seen = 0usize;
    let starts = epoch_starts(horizon);
    for (e, &start) in starts.iter().enumerate() {
        let end = starts.get(e + 1).copied().unwrap_or(horizon);
        while seen <= start {
            let s = stats_at(seen)?;
            sum_alpha += s.alpha;
            sum_delta += s.delta.max(1);
            all_strong &= s.class == Observability::StronglyObservable;
            seen += 1;
        }
        let len = (end - start) as u64;
        let (gamma, eta) = if all_strong {
            strong_rates(sum_alpha as f64 / seen as f64, len)
        } else {
            weak_rates(sum_delta as f64 / seen as f64, k, len)
        };
        let params = Exp3GParams {
            eta,
            gamma,
            explore: Vec::new(),
        };
        let mut learner = Exp3G::time_varying(k, params, Mode::Informed)?;
        play_rounds(
            source,
            &mut learner,
            Mode::Informed,
            env,
            start..end,
            &mut rng,
            &mut transcript,
        )?;
    }
    Ok(transcript)
}
