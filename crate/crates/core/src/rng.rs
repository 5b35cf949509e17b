//! Seeding contract.
//!
//! All randomness comes from ChaCha8 generators. A game seed owns two
//! independent ChaCha streams: [`PLAYER_STREAM`] for the learner's action
//! draws and [`ENVIRONMENT_STREAM`] for loss and graph realizations.
//! Repetition `r` of an experiment with base seed `s` plays with game seed
//! [`repetition_seed`]`(s, r)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type GameRng = ChaCha8Rng;

pub const PLAYER_STREAM: u64 = 0;
pub const ENVIRONMENT_STREAM: u64 = 1;
/// Stream reserved for randomized graph constructions.
pub const CONSTRUCTION_STREAM: u64 = 2;

pub fn stream_rng(seed: u64, stream: u64) -> GameRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer over `base + rep`.
pub fn repetition_seed(base: u64, rep: u64) -> u64 {
    let mut z = base.wrapping_add(rep.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)`.
pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

/// Inverse-CDF draw from `probs` using a single uniform. The last index with
/// positive mass absorbs rounding.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u = unit(rng);
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: Vec<u64> = (0..4).map({
            let mut r = stream_rng(7, PLAYER_STREAM);
            move |_| r.random()
        }).collect();
        let b: Vec<u64> = (0..4).map({
            let mut r = stream_rng(7, PLAYER_STREAM);
            move |_| r.random()
        }).collect();
        let c: Vec<u64> = (0..4).map({
            let mut r = stream_rng(7, ENVIRONMENT_STREAM);
            move |_| r.random()
        }).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn repetition_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|r| repetition_seed(42, r)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn sampling_skips_zero_mass() {
        let mut rng = stream_rng(1, 0);
        for _ in 0..1000 {
            assert_eq!(sample_index(&[0.0, 1.0, 0.0], &mut rng), 1);
        }
    }
}
