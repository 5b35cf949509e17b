//! Plays learners against environments and accounts regret.
//!
//! Round `t` of a game: in the informed model the learner is shown `G_t`,
//! it draws `I_t`, incurs `l_t(I_t)`, and receives a [`FeedbackEvent`] with
//! the losses of `N^out_t(I_t)` (plus `G_t` itself in the uninformed model).
//! The learner's draws use the player stream of the game seed.

mod doubling;
mod sweep;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::environments::{EnvKind, Environment, GraphSequence};
use crate::error::{Error, Result};
use crate::graph::{profile, FeedbackGraph, GraphProfile, Observability};
use crate::learners::{
    preset_loopless_clique, preset_strong, preset_uninformed, preset_weak, Exp3G, Exp3GParams,
    FeedbackEvent, FixedActionLearner, HedgeLearner, Learner, Mode, UniformLearner,
};
use crate::rng::{stream_rng, GameRng, PLAYER_STREAM};

pub use doubling::{doubling_wrapper, epoch_starts};
pub use sweep::{
    fit_slope, mean_and_stderr, sweep, ExperimentReport, HorizonSummary, SweepConfig, SweepRow,
    RESULT_COLUMNS,
};

/// Where the round's graph comes from.
#[derive(Debug, Clone)]
pub enum GraphSource {
    Fixed(Arc<FeedbackGraph>),
    Sequence(GraphSequence),
}

impl GraphSource {
    /// The environment's own graph sequence if it has one. Otherwise
    /// `graph`, repeated as a constant sequence for the time-varying modes.
    pub fn for_game(graph: Arc<FeedbackGraph>, env: &Environment, mode: Mode) -> Result<Self> {
        Ok(match (env.graphs(), mode) {
            (Some(seq), _) => GraphSource::Sequence(seq.clone()),
            (None, Mode::Fixed) => GraphSource::Fixed(graph),
            (None, _) => GraphSource::Sequence(GraphSequence::constant(graph, env.horizon())?),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.first().num_vertices()
    }

    pub fn graph(&self, t: usize) -> &Arc<FeedbackGraph> {
        match self {
            GraphSource::Fixed(g) => g,
            GraphSource::Sequence(s) => s.graph(t),
        }
    }

    pub fn first(&self) -> &Arc<FeedbackGraph> {
        self.graph(0)
    }

    /// Rounds available, `None` for a fixed graph.
    pub fn horizon(&self) -> Option<usize> {
        match self {
            GraphSource::Fixed(_) => None,
            GraphSource::Sequence(s) => Some(s.horizon()),
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, GraphSource::Fixed(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LearnerKind {
    Exp3G,
    Hedge,
    Uniform,
    /// Always plays the given arm (0-based).
    FixedArm(usize),
}

impl LearnerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Exp3G => "exp3g",
            LearnerKind::Hedge => "hedge",
            LearnerKind::Uniform => "uniform",
            LearnerKind::FixedArm(_) => "fixed_arm",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PresetKind {
    /// Picked from the observability class of the (first) graph.
    #[default]
    Auto,
    Strong,
    Weak,
    LooplessClique,
    Uninformed,
    /// Rates given explicitly, `U = V`.
    Manual,
}

impl PresetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetKind::Auto => "auto",
            PresetKind::Strong => "strong",
            PresetKind::Weak => "weak",
            PresetKind::LooplessClique => "loopless-clique",
            PresetKind::Uninformed => "uninformed",
            PresetKind::Manual => "manual",
        }
    }
}

impl fmt::Display for PresetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "auto" => Ok(PresetKind::Auto),
            "strong" => Ok(PresetKind::Strong),
            "weak" => Ok(PresetKind::Weak),
            "loopless-clique" => Ok(PresetKind::LooplessClique),
            "uninformed" => Ok(PresetKind::Uninformed),
            "manual" => Ok(PresetKind::Manual),
            other => Err(Error::invalid(format!("unknown preset `{other}`"))),
        }
    }
}

/// How to build a learner for a game.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub kind: LearnerKind,
    pub preset: PresetKind,
    pub mode: Mode,
    /// Overrides the preset's learning rate (required for `Manual`).
    pub eta: Option<f64>,
    /// Overrides the preset's exploration rate (`Manual` defaults to 0).
    pub gamma: Option<f64>,
}

impl LearnerConfig {
    pub fn exp3g(preset: PresetKind, mode: Mode) -> Self {
        Self {
            kind: LearnerKind::Exp3G,
            preset,
            mode,
            eta: None,
            gamma: None,
        }
    }

    pub fn baseline(kind: LearnerKind) -> Self {
        Self {
            kind,
            preset: PresetKind::Auto,
            mode: Mode::Fixed,
            eta: None,
            gamma: None,
        }
    }

    /// `Auto` resolved against `profile`; other presets unchanged.
    pub fn resolve_preset(&self, profile: &GraphProfile) -> PresetKind {
        if self.preset != PresetKind::Auto {
            return self.preset;
        }
        match (profile.class, self.mode) {
            (_, Mode::Uninformed) | (Observability::NotObservable, _) => PresetKind::Uninformed,
            (Observability::StronglyObservable, _) => PresetKind::Strong,
            (Observability::WeaklyObservable, _) => PresetKind::Weak,
        }
    }

    /// Exp3.G parameters for a game of `horizon` rounds on a graph with
    /// `profile`.
    pub fn exp3g_params(&self, profile: &GraphProfile, horizon: usize) -> Result<Exp3GParams> {
        let t = horizon as u64;
        let k = profile.num_vertices;
        let mut params = match self.resolve_preset(profile) {
            PresetKind::Strong => preset_strong(profile, t)?.params(),
            PresetKind::Weak => preset_weak(profile, t)?.params(),
            PresetKind::LooplessClique => preset_loopless_clique(k, t)?.params(),
            PresetKind::Uninformed => preset_uninformed(k, t)?.params(),
            PresetKind::Manual => Exp3GParams {
                eta: self
                    .eta
                    .ok_or_else(|| Error::invalid("the manual preset needs a learning rate"))?,
                gamma: 0.0,
                explore: (0..k).collect(),
            },
            PresetKind::Auto => unreachable!("resolved above"),
        };
        if let Some(eta) = self.eta {
            params.eta = eta;
        }
        if let Some(gamma) = self.gamma {
            params.gamma = gamma;
        }
        Ok(params)
    }

    /// Builds the learner for `source`, tuning presets to `horizon`. For
    /// time-varying sources presets are tuned to the first graph.
    pub fn build(&self, source: &GraphSource, horizon: usize) -> Result<Box<dyn Learner>> {
        check_mode(self.mode, source)?;
        let k = source.num_vertices();
        Ok(match self.kind {
            LearnerKind::Exp3G => {
                let params = self.exp3g_params(&profile(source.first())?, horizon)?;
                match source {
                    GraphSource::Fixed(g) => Box::new(Exp3G::fixed(Arc::clone(g), params)?),
                    GraphSource::Sequence(_) => {
                        Box::new(Exp3G::time_varying(k, params, self.mode)?)
                    }
                }
            }
            LearnerKind::Hedge => {
                let eta = self
                    .eta
                    .unwrap_or_else(|| (8.0 * (k as f64).ln() / horizon as f64).sqrt());
                let full = |g: &FeedbackGraph| (0..k).all(|i| g.out_neighbors(i).len() == k);
                let all_full = match source {
                    GraphSource::Fixed(g) => full(g),
                    GraphSource::Sequence(s) => s.palette().iter().all(|g| full(g)),
                };
                if !all_full {
                    return Err(Error::invalid(
                        "hedge needs full feedback: every action must reveal every loss",
                    ));
                }
                Box::new(HedgeLearner::new(k, eta.max(f64::MIN_POSITIVE))?)
            }
            LearnerKind::Uniform => Box::new(UniformLearner::new(k)?),
            LearnerKind::FixedArm(a) => Box::new(FixedActionLearner::new(k, a)?),
        })
    }
}

fn check_mode(mode: Mode, source: &GraphSource) -> Result<()> {
    match (mode, source) {
        (Mode::Fixed, GraphSource::Sequence(_)) => Err(Error::invalid(
            "fixed mode cannot play a time-varying graph sequence; use informed or uninformed",
        )),
        (Mode::Informed | Mode::Uninformed, GraphSource::Fixed(_)) => Err(Error::invalid(format!(
            "{mode} mode needs a time-varying graph source"
        ))),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    /// 1-based round number.
    pub t: usize,
    pub action: usize,
    pub loss: f64,
    /// `|N^out_t(I_t)|`.
    pub observed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameTranscript {
    pub seed: u64,
    pub env: EnvKind,
    pub chi: Option<i64>,
    pub rounds: Vec<RoundRecord>,
    pub player_loss: f64,
    /// `sum_t l_t(i)` for every arm.
    pub arm_losses: Vec<f64>,
    pub play_counts: Vec<usize>,
    pub means: Option<Vec<f64>>,
}

impl GameTranscript {
    fn new(seed: u64, env: &Environment) -> Self {
        let k = env.num_actions();
        Self {
            seed,
            env: env.kind(),
            chi: env.chi(),
            rounds: Vec::with_capacity(env.horizon()),
            player_loss: 0.0,
            arm_losses: vec![0.0; k],
            play_counts: vec![0; k],
            means: env.means().map(<[f64]>::to_vec),
        }
    }

    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    pub fn best_fixed_loss(&self) -> f64 {
        self.arm_losses.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Against the best arm in hindsight.
    pub fn regret(&self) -> f64 {
        self.player_loss - self.best_fixed_loss()
    }

    /// `sum_t mu(I_t) - T min_i mu_i`, when the environment has means.
    pub fn expected_regret(&self) -> Option<f64> {
        let mu = self.means.as_ref()?;
        let best = mu.iter().copied().fold(f64::INFINITY, f64::min);
        let incurred: f64 = self
            .play_counts
            .iter()
            .zip(mu)
            .map(|(&n, &m)| n as f64 * m)
            .sum();
        Some(incurred - self.horizon() as f64 * best)
    }

    /// Recomputes the accounting from `table`; returns the largest
    /// discrepancy.
    pub fn accounting_error(&self, table: &crate::environments::LossTable) -> f64 {
        let player: f64 = self
            .rounds
            .iter()
            .map(|r| table.row(r.t - 1)[r.action])
            .sum();
        let mut err = (player - self.player_loss).abs();
        let mut arms = vec![0.0; table.num_actions()];
        for row in table.rows().take(self.rounds.len()) {
            for (a, l) in arms.iter_mut().zip(row) {
                *a += l;
            }
        }
        for (a, b) in arms.iter().zip(&self.arm_losses) {
            err = err.max((a - b).abs());
        }
        err
    }
}

fn check_dimensions(source: &GraphSource, learner_k: usize, env: &Environment) -> Result<()> {
    let k = source.num_vertices();
    if env.num_actions() != k || learner_k != k {
        return Err(Error::DimensionMismatch(format!(
            "graph has {k} vertices, environment {} actions, learner {learner_k} actions",
            env.num_actions()
        )));
    }
    if let Some(h) = source.horizon() {
        if h < env.horizon() {
            return Err(Error::DimensionMismatch(format!(
                "graph sequence has {h} rounds, environment {}",
                env.horizon()
            )));
        }
    }
    Ok(())
}

/// Plays rounds `range` (0-based) and appends them to `transcript`.
fn play_rounds(
    source: &GraphSource,
    learner: &mut dyn Learner,
    mode: Mode,
    env: &Environment,
    range: std::ops::Range<usize>,
    rng: &mut GameRng,
    transcript: &mut GameTranscript,
) -> Result<()> {
    for t in range {
        let graph = source.graph(t);
        if mode == Mode::Informed {
            learner.reveal_graph(graph)?;
        }
        let action = learner.act(rng)?;
        let losses = env.losses().row(t);
        let event = FeedbackEvent::observe(graph, action, losses, mode == Mode::Uninformed)?;
        learner.update(&event)?;
        transcript.player_loss += losses[action];
        transcript.play_counts[action] += 1;
        for (a, l) in transcript.arm_losses.iter_mut().zip(losses) {
            *a += l;
        }
        transcript.rounds.push(RoundRecord {
            t: t + 1,
            action,
            loss: losses[action],
            observed: event.observed().len(),
        });
    }
    Ok(())
}

/// Plays an already-built learner for the environment's full horizon.
pub fn play(
    source: &GraphSource,
    learner: &mut dyn Learner,
    mode: Mode,
    env: &Environment,
    seed: u64,
) -> Result<GameTranscript> {
    check_mode(mode, source)?;
    check_dimensions(source, learner.num_actions(), env)?;
    let mut rng = stream_rng(seed, PLAYER_STREAM);
    let mut transcript = GameTranscript::new(seed, env);
    play_rounds(source, learner, mode, env, 0..env.horizon(), &mut rng, &mut transcript)?;
    Ok(transcript)
}

/// Builds the learner from `config`, tuned to the environment's horizon,
/// and plays it.
pub fn run_game(
    source: &GraphSource,
    config: &LearnerConfig,
    env: &Environment,
    seed: u64,
) -> Result<GameTranscript> {
    let mut learner = config.build(source, env.horizon())?;
    play(source, learner.as_mut(), config.mode, env, seed)
}

/// Averages the regret of a matched pair of runs against the
/// non-observable construction with `chi = 0` and `chi = 1`: with `M` the
/// number of plays of arm 1, `1/2 (M/2) + 1/2 ((T - M)/2)`.
pub fn expected_regret_thm4(a: &GameTranscript, b: &GameTranscript) -> Result<f64> {
    if a.env != EnvKind::NonObservable || b.env != EnvKind::NonObservable {
        return Err(Error::invalid(
            "both transcripts must come from the non-observable construction",
        ));
    }
    if a.seed != b.seed {
        return Err(Error::invalid(format!(
            "seeds differ: {} vs {}",
            a.seed, b.seed
        )));
    }
    if a.horizon() != b.horizon() || a.play_counts.len() != b.play_counts.len() {
        return Err(Error::invalid("transcripts have different dimensions"));
    }
    let (one, zero) = match (a.chi, b.chi) {
        (Some(1), Some(0)) => (a, b),
        (Some(0), Some(1)) => (b, a),
        _ => return Err(Error::invalid("need one run with chi = 1 and one with chi = 0")),
    };
    let t = one.horizon() as f64;
    let m1 = one.play_counts[0] as f64;
    let m0 = zero.play_counts[0] as f64;
    Ok(0.5 * (0.5 * m1) + 0.5 * (0.5 * (t - m0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{EnvConfig, LossTable};
    use crate::graph::{catalog, CatalogGraph};
    use crate::learners::Hedge;

    fn fixed(g: FeedbackGraph) -> GraphSource {
        GraphSource::Fixed(Arc::new(g))
    }

    #[test]
    fn single_action_has_zero_regret() {
        let src = fixed(FeedbackGraph::from_edges(1, [(0, 0)]).unwrap());
        let env = Environment::bernoulli(&[0.4], 200, 1).unwrap();
        let cfg = LearnerConfig::exp3g(PresetKind::Manual, Mode::Fixed);
        let cfg = LearnerConfig {
            eta: Some(0.1),
            ..cfg
        };
        let tr = run_game(&src, &cfg, &env, 3).unwrap();
        assert_eq!(tr.regret(), 0.0);
        assert_eq!(tr.horizon(), 200);
    }

    #[test]
    fn reproducible_and_accounted() {
        let g = catalog(CatalogGraph::LoopyStar, 5).unwrap();
        let src = fixed(g);
        let env = Environment::bernoulli(&[0.3, 0.5, 0.5, 0.6, 0.7], 500, 8).unwrap();
        let cfg = LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed);
        let a = run_game(&src, &cfg, &env, 21).unwrap();
        let b = run_game(&src, &cfg, &env, 21).unwrap();
        assert_eq!(a, b);
        assert!(a.accounting_error(env.losses()) < 1e-9);
        let direct: f64 = a.rounds.iter().map(|r| r.loss).sum();
        assert!((direct - a.player_loss).abs() < 1e-9);
        assert_eq!(a.play_counts.iter().sum::<usize>(), 500);
        assert!(a.expected_regret().unwrap() >= 0.0);
    }

    #[test]
    fn full_feedback_matches_hedge() {
        let g = Arc::new(catalog(CatalogGraph::Full, 4).unwrap());
        let src = GraphSource::Fixed(Arc::clone(&g));
        let env = Environment::bernoulli(&[0.2, 0.4, 0.6, 0.8], 300, 2).unwrap();
        let params = Exp3GParams {
            eta: 0.1,
            gamma: 0.0,
            explore: vec![0, 1, 2, 3],
        };
        let mut exp3g = Exp3G::fixed(g, params).unwrap();
        let mut hedge = Hedge::new(4, 0.1).unwrap();
        let mut rng = stream_rng(0, PLAYER_STREAM);
        for t in 0..300 {
            let a = Learner::act(&mut exp3g, &mut rng).unwrap();
            let ev = FeedbackEvent::observe(src.first(), a, env.losses().row(t), false).unwrap();
            Learner::update(&mut exp3g, &ev).unwrap();
            let q = hedge.step(env.losses().row(t)).unwrap();
            for (x, y) in exp3g.q().iter().zip(&q) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn mode_and_dimension_checks() {
        let g = Arc::new(catalog(CatalogGraph::Bandit, 3).unwrap());
        let env = Environment::bernoulli(&[0.5; 3], 10, 0).unwrap();
        let informed = LearnerConfig::exp3g(PresetKind::Strong, Mode::Informed);
        assert!(run_game(&GraphSource::Fixed(Arc::clone(&g)), &informed, &env, 0).is_err());
        let seq = GraphSequence::constant(Arc::clone(&g), 10).unwrap();
        let fixed_cfg = LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed);
        assert!(run_game(&GraphSource::Sequence(seq.clone()), &fixed_cfg, &env, 0).is_err());
        assert!(run_game(&GraphSource::Sequence(seq), &informed, &env, 0).is_ok());
        let env4 = Environment::bernoulli(&[0.5; 4], 10, 0).unwrap();
        assert!(matches!(
            run_game(&GraphSource::Fixed(g), &fixed_cfg, &env4, 0),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn hedge_only_on_full_feedback() {
        let cfg = LearnerConfig::baseline(LearnerKind::Hedge);
        let env = Environment::bernoulli(&[0.5; 3], 10, 0).unwrap();
        let bandit = fixed(catalog(CatalogGraph::Bandit, 3).unwrap());
        assert!(run_game(&bandit, &cfg, &env, 0).is_err());
        let full = fixed(catalog(CatalogGraph::Full, 3).unwrap());
        assert!(run_game(&full, &cfg, &env, 0).is_ok());
    }

    fn blind_first() -> GraphSource {
        // Vertex 1 unobservable; 2 and 3 see each other and themselves.
        fixed(FeedbackGraph::from_edges(3, [(1, 1), (1, 2), (2, 1), (2, 2)]).unwrap())
    }

    #[test]
    fn thm4_pair_gives_quarter_horizon() {
        let src = blind_first();
        for cfg in [
            LearnerConfig::exp3g(PresetKind::Auto, Mode::Fixed),
            LearnerConfig::baseline(LearnerKind::Uniform),
            LearnerConfig::baseline(LearnerKind::FixedArm(0)),
            LearnerConfig::baseline(LearnerKind::FixedArm(2)),
        ] {
            let runs: Vec<_> = [0u8, 1]
                .iter()
                .map(|&chi| {
                    let env = EnvConfig::NonObservable { chi: Some(chi) }
                        .build(src.first(), 1000, 5)
                        .unwrap();
                    run_game(&src, &cfg, &env, 5).unwrap()
                })
                .collect();
            assert_eq!(runs[0].play_counts, runs[1].play_counts);
            assert_eq!(expected_regret_thm4(&runs[0], &runs[1]).unwrap(), 250.0);
        }
    }

    #[test]
    fn thm4_pair_validation() {
        let src = blind_first();
        let cfg = LearnerConfig::baseline(LearnerKind::Uniform);
        let build = |chi, seed| {
            let env = Environment::nonobservable(3, chi, 100).unwrap();
            run_game(&src, &cfg, &env, seed).unwrap()
        };
        assert!(expected_regret_thm4(&build(0, 1), &build(1, 2)).is_err());
        assert!(expected_regret_thm4(&build(1, 1), &build(1, 1)).is_err());
        let table = LossTable::from_rows(vec![vec![0.5; 3]; 100]).unwrap();
        let other = run_game(&src, &cfg, &Environment::fixed_table(table), 1).unwrap();
        assert!(expected_regret_thm4(&build(0, 1), &other).is_err());
    }

    #[test]
    fn uninformed_plays_sequence() {
        let env = Environment::uninformed_separation(5, 400, 1, 3, None).unwrap();
        let full = Arc::new(catalog(CatalogGraph::Full, 5).unwrap());
        let src = GraphSource::for_game(full, &env, Mode::Uninformed).unwrap();
        assert!(!src.is_fixed());
        let cfg = LearnerConfig::exp3g(PresetKind::Auto, Mode::Uninformed);
        let tr = run_game(&src, &cfg, &env, 3).unwrap();
        assert_eq!(tr.horizon(), 400);
        for r in &tr.rounds {
            let g = src.graph(r.t - 1);
            assert_eq!(r.observed, g.out_neighbors(r.action).len());
        }
    }
}
