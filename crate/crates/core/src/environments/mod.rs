//! Loss (and graph) sequences: replayed tables, Bernoulli baselines and the
//! lower-bound adversaries.
//!
//! Every environment is oblivious. Its whole loss table, and its graph
//! sequence when it has one, is realized at construction from the seed and
//! the parameters, using the environment stream of the seed.

mod lemma3;
mod table;

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{FeedbackGraph, Observability, VertexTag};
use crate::rng::{stream_rng, unit, GameRng, CONSTRUCTION_STREAM, ENVIRONMENT_STREAM};

pub use lemma3::{
    domination_cap, is_spread_independent, lemma3_construct, SpreadIndependentSet,
    LEMMA3_MAX_RETRIES,
};
pub use table::LossTable;

/// Largest gap used by the Bernoulli lower-bound constructions.
pub const MAX_GAP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvKind {
    Table,
    Bernoulli,
    /// Deterministic construction against an unobservable arm.
    NonObservable,
    /// Bernoulli construction over a spread independent set of weak vertices.
    WeakLower,
    /// Bernoulli construction on a (weak, blind) vertex pair.
    SimpleWeak,
    /// Time-varying graphs where one hidden vertex reveals arm 1.
    UninformedSeparation,
}

impl EnvKind {
    /// Selector used on the command line and in result files.
    pub fn as_str(self) -> &'static str {
        match self {
            EnvKind::Table => "table",
            EnvKind::Bernoulli => "bernoulli",
            EnvKind::NonObservable => "thm4",
            EnvKind::WeakLower => "thm5",
            EnvKind::SimpleWeak => "thm8",
            EnvKind::UninformedSeparation => "thm7",
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `G_t` for `t = 0..T`: a small palette of graphs and, per round, an index
/// into it.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSequence {
    palette: Vec<Arc<FeedbackGraph>>,
    schedule: Vec<usize>,
}

impl GraphSequence {
    pub fn new(palette: Vec<Arc<FeedbackGraph>>, schedule: Vec<usize>) -> Result<Self> {
        let Some(first) = palette.first() else {
            return Err(Error::invalid("graph palette is empty"));
        };
        let k = first.num_vertices();
        if palette.iter().any(|g| g.num_vertices() != k) {
            return Err(Error::DimensionMismatch(
                "graphs of a sequence must share the vertex set".into(),
            ));
        }
        if schedule.is_empty() {
            return Err(Error::invalid("graph schedule is empty"));
        }
        if let Some(&bad) = schedule.iter().find(|&&s| s >= palette.len()) {
            return Err(Error::invalid(format!(
                "schedule refers to graph {bad} of a palette of {}",
                palette.len()
            )));
        }
        Ok(Self { palette, schedule })
    }

    /// The same graph every round.
    pub fn constant(graph: Arc<FeedbackGraph>, horizon: usize) -> Result<Self> {
        Self::new(vec![graph], vec![0; horizon])
    }

    pub fn num_vertices(&self) -> usize {
        self.palette[0].num_vertices()
    }

    pub fn horizon(&self) -> usize {
        self.schedule.len()
    }

    pub fn graph(&self, t: usize) -> &Arc<FeedbackGraph> {
        &self.palette[self.schedule[t]]
    }

    pub fn palette(&self) -> &[Arc<FeedbackGraph>] {
        &self.palette
    }

    /// Palette index of round `t`.
    pub fn index(&self, t: usize) -> usize {
        self.schedule[t]
    }
}

/// Which vertex pair the two-arm weak constructions act on: `weak` is
/// weakly observable and `blind` does not observe it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakRoles {
    pub weak: usize,
    pub blind: usize,
}

impl WeakRoles {
    /// Vertex 1 and vertex 2, the canonical labelling.
    pub const CANONICAL: WeakRoles = WeakRoles { weak: 0, blind: 1 };

    /// The smallest weakly observable vertex and the smallest other vertex
    /// without an edge into it.
    pub fn find(g: &FeedbackGraph) -> Result<Self> {
        let tags = g.vertex_tags();
        let weak = tags
            .iter()
            .position(|&t| t == VertexTag::Weak)
            .ok_or_else(|| Error::WrongClass("graph has no weakly observable vertex".into()))?;
        let blind = (0..g.num_vertices())
            .find(|&j| j != weak && !g.has_edge(j, weak))
            .expect("a weak vertex misses an in-edge from some other vertex");
        Ok(Self { weak, blind })
    }

    /// Checks the pair against `g`.
    pub fn validate(self, g: &FeedbackGraph) -> Result<()> {
        g.check_vertex(self.weak)?;
        g.check_vertex(self.blind)?;
        if self.weak == self.blind {
            return Err(Error::invalid("weak and blind vertices must differ"));
        }
        if g.classify_vertex(self.weak)? != VertexTag::Weak {
            return Err(Error::WrongClass(format!(
                "vertex {} is not weakly observable",
                self.weak + 1
            )));
        }
        if g.has_edge(self.blind, self.weak) {
            return Err(Error::invalid(format!(
                "vertex {} observes vertex {}",
                self.blind + 1,
                self.weak + 1
            )));
        }
        Ok(())
    }
}

/// A realized environment.
#[derive(Debug, Clone)]
pub struct Environment {
    kind: EnvKind,
    losses: LossTable,
    means: Option<Vec<f64>>,
    graphs: Option<GraphSequence>,
    seed: Option<u64>,
    chi: Option<i64>,
    eps: Option<f64>,
    support: Option<Vec<usize>>,
}

impl Environment {
    fn new(kind: EnvKind, losses: LossTable) -> Self {
        Self {
            kind,
            losses,
            means: None,
            graphs: None,
            seed: None,
            chi: None,
            eps: None,
            support: None,
        }
    }

    /// Replays `table` verbatim.
    pub fn fixed_table(table: LossTable) -> Self {
        Self::new(EnvKind::Table, table)
    }

    /// Independent `Bernoulli(mu_i)` losses.
    pub fn bernoulli(mu: &[f64], horizon: usize, seed: u64) -> Result<Self> {
        check_means(mu)?;
        check_horizon(horizon)?;
        let mut rng = stream_rng(seed, ENVIRONMENT_STREAM);
        let losses = bernoulli_table(mu, horizon, &mut rng)?;
        let mut env = Self::new(EnvKind::Bernoulli, losses);
        env.means = Some(mu.to_vec());
        env.seed = Some(seed);
        Ok(env)
    }

    /// Arm 1 loses `chi` every round, every other arm loses `1/2`.
    pub fn nonobservable(num_actions: usize, chi: u8, horizon: usize) -> Result<Self> {
        if chi > 1 {
            return Err(Error::invalid(format!("chi must be 0 or 1, got {chi}")));
        }
        if num_actions < 2 {
            return Err(Error::invalid("need at least two actions"));
        }
        check_horizon(horizon)?;
        let mut row = vec![0.5; num_actions];
        row[0] = f64::from(chi);
        let data = row
            .iter()
            .copied()
            .cycle()
            .take(horizon * num_actions)
            .collect();
        let table = LossTable::from_flat(horizon, num_actions, data)?;
        let mut env = Self::new(EnvKind::NonObservable, table);
        env.means = Some(row);
        env.chi = Some(i64::from(chi));
        Ok(env)
    }

    /// Bernoulli construction over a spread independent set `U` of the weak
    /// vertices of `g`: mean `1/2 - eps` on a hidden arm `chi` drawn
    /// uniformly from `U`, `1/2` on the rest of `U`, `1` outside `U`, with
    /// `eps = m^{1/3} (32 T ln K)^{-1/3}` clipped to `1/4`. When `|U| < 2`
    /// this degrades to [`Environment::simple_weak`] with a seeded sign.
    pub fn weak_lower(
        g: &FeedbackGraph,
        horizon: usize,
        seed: u64,
        eps: Option<f64>,
    ) -> Result<Self> {
        if g.classify() != Observability::WeaklyObservable {
            return Err(Error::WrongClass(format!(
                "needs a weakly observable graph, got {}",
                g.classify()
            )));
        }
        check_horizon(horizon)?;
        let k = g.num_vertices();
        let mut construction = stream_rng(seed, CONSTRUCTION_STREAM);
        let spread = lemma3_construct(g, &g.weak_set(), &mut construction)?;
        let m = spread.set.len();
        if m < 2 {
            let chi = if construction.random_bool(0.5) { 1 } else { -1 };
            return Self::simple_weak(k, horizon, chi, WeakRoles::find(g)?, seed, eps);
        }
        let eps = match eps {
            Some(e) => check_gap(e)?,
            None => weak_lower_gap(m, k, horizon),
        };
        let chi = spread.set[construction.random_range(0..m)];
        let mut mu = vec![1.0; k];
        for &u in &spread.set {
            mu[u] = 0.5;
        }
        mu[chi] = 0.5 - eps;
        let losses = bernoulli_table(&mu, horizon, &mut stream_rng(seed, ENVIRONMENT_STREAM))?;
        let mut env = Self::new(EnvKind::WeakLower, losses);
        env.means = Some(mu);
        env.seed = Some(seed);
        env.chi = Some(chi as i64);
        env.eps = Some(eps);
        env.support = Some(spread.set);
        Ok(env)
    }

    /// Two-arm weak construction: `mu_weak = 1/2 - eps chi`, `mu_blind = 1/2`,
    /// every other arm `1`, with `eps = T^{-1/3} / 2` clipped to `1/4`.
    pub fn simple_weak(
        num_actions: usize,
        horizon: usize,
        chi: i8,
        roles: WeakRoles,
        seed: u64,
        eps: Option<f64>,
    ) -> Result<Self> {
        if num_actions < 3 {
            return Err(Error::invalid(format!(
                "weakly observable graphs have at least 3 vertices, got {num_actions}"
            )));
        }
        check_horizon(horizon)?;
        let eps = match eps {
            Some(e) => check_gap(e)?,
            None => simple_weak_gap(horizon),
        };
        let mu = two_arm_means(num_actions, chi, roles, eps)?;
        let losses = bernoulli_table(&mu, horizon, &mut stream_rng(seed, ENVIRONMENT_STREAM))?;
        let mut env = Self::new(EnvKind::SimpleWeak, losses);
        env.means = Some(mu);
        env.seed = Some(seed);
        env.chi = Some(i64::from(chi));
        env.eps = Some(eps);
        Ok(env)
    }

    /// Time-varying construction: every round a vertex `J_t` is drawn
    /// uniformly from `{3, ..., K}` and `G_t` is the complete graph with all
    /// self-loops minus every in-edge of vertex 1 except `(J_t, 1)`. Losses
    /// follow [`Environment::simple_weak`] on vertices 1 and 2 with
    /// `eps = (K/T)^{1/3} / 4` clipped to `1/4`.
    pub fn uninformed_separation(
        num_actions: usize,
        horizon: usize,
        chi: i8,
        seed: u64,
        eps: Option<f64>,
    ) -> Result<Self> {
        if num_actions < 4 {
            return Err(Error::invalid(format!(
                "the uninformed construction needs K >= 4, got {num_actions}"
            )));
        }
        check_horizon(horizon)?;
        let eps = match eps {
            Some(e) => check_gap(e)?,
            None => uninformed_gap(num_actions, horizon),
        };
        let mu = two_arm_means(num_actions, chi, WeakRoles::CANONICAL, eps)?;
        let mut rng = stream_rng(seed, ENVIRONMENT_STREAM);
        let losses = bernoulli_table(&mu, horizon, &mut rng)?;
        let palette = (2..num_actions)
            .map(|j| separation_graph(num_actions, j).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let schedule = (0..horizon)
            .map(|_| rng.random_range(0..num_actions - 2))
            .collect();
        let mut env = Self::new(EnvKind::UninformedSeparation, losses);
        env.graphs = Some(GraphSequence::new(palette, schedule)?);
        env.means = Some(mu);
        env.seed = Some(seed);
        env.chi = Some(i64::from(chi));
        env.eps = Some(eps);
        Ok(env)
    }

    pub fn kind(&self) -> EnvKind {
        self.kind
    }

    pub fn losses(&self) -> &LossTable {
        &self.losses
    }

    pub fn horizon(&self) -> usize {
        self.losses.horizon()
    }

    pub fn num_actions(&self) -> usize {
        self.losses.num_actions()
    }

    /// Expected loss of each arm, for the stochastic and deterministic
    /// constructions.
    pub fn means(&self) -> Option<&[f64]> {
        self.means.as_deref()
    }

    pub fn graphs(&self) -> Option<&GraphSequence> {
        self.graphs.as_ref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The hidden parameter: `0`/`1` for the non-observable construction,
    /// `+1`/`-1` for the two-arm constructions, the good arm (0-based) for
    /// the independent-set construction.
    pub fn chi(&self) -> Option<i64> {
        self.chi
    }

    pub fn eps(&self) -> Option<f64> {
        self.eps
    }

    /// The independent set `U` of the weak-graph construction.
    pub fn support(&self) -> Option<&[usize]> {
        self.support.as_deref()
    }
}

/// `m^{1/3} (32 T ln K)^{-1/3}`, clipped to `1/4`.
pub fn weak_lower_gap(m: usize, num_actions: usize, horizon: usize) -> f64 {
    let denom = 32.0 * horizon as f64 * (num_actions as f64).ln();
    ((m as f64 / denom).cbrt()).min(MAX_GAP)
}

/// `T^{-1/3} / 2`, clipped to `1/4`.
pub fn simple_weak_gap(horizon: usize) -> f64 {
    (0.5 / (horizon as f64).cbrt()).min(MAX_GAP)
}

/// `(K/T)^{1/3} / 4`, clipped to `1/4`.
pub fn uninformed_gap(num_actions: usize, horizon: usize) -> f64 {
    (0.25 * (num_actions as f64 / horizon as f64).cbrt()).min(MAX_GAP)
}

/// Complete graph with all self-loops whose only edge into vertex 1 comes
/// from `reveal` (0-based).
pub fn separation_graph(num_actions: usize, reveal: usize) -> Result<FeedbackGraph> {
    if reveal == 0 || reveal >= num_actions {
        return Err(Error::VertexOutOfRange {
            vertex: reveal,
            num_vertices: num_actions,
        });
    }
    let edges = (0..num_actions)
        .flat_map(|u| (0..num_actions).map(move |v| (u, v)))
        .filter(|&(u, v)| v != 0 || u == reveal);
    FeedbackGraph::from_edges(num_actions, edges)
}

/// Declarative environment choice, realized per horizon and seed.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvConfig {
    Table(Arc<LossTable>),
    Bernoulli { mu: Vec<f64> },
    /// `chi = None` averages over both values.
    NonObservable { chi: Option<u8> },
    WeakLower { eps: Option<f64> },
    SimpleWeak { chi: Option<i8>, eps: Option<f64> },
    UninformedSeparation { chi: Option<i8>, eps: Option<f64> },
}

impl EnvConfig {
    pub fn kind(&self) -> EnvKind {
        match self {
            EnvConfig::Table(_) => EnvKind::Table,
            EnvConfig::Bernoulli { .. } => EnvKind::Bernoulli,
            EnvConfig::NonObservable { .. } => EnvKind::NonObservable,
            EnvConfig::WeakLower { .. } => EnvKind::WeakLower,
            EnvConfig::SimpleWeak { .. } => EnvKind::SimpleWeak,
            EnvConfig::UninformedSeparation { .. } => EnvKind::UninformedSeparation,
        }
    }

    /// The configurations to average over: both values of an unset `chi`,
    /// otherwise just `self`.
    pub fn chi_variants(&self) -> Vec<EnvConfig> {
        match *self {
            EnvConfig::NonObservable { chi: None } => vec![
                EnvConfig::NonObservable { chi: Some(0) },
                EnvConfig::NonObservable { chi: Some(1) },
            ],
            EnvConfig::SimpleWeak { chi: None, eps } => vec![
                EnvConfig::SimpleWeak { chi: Some(1), eps },
                EnvConfig::SimpleWeak { chi: Some(-1), eps },
            ],
            EnvConfig::UninformedSeparation { chi: None, eps } => vec![
                EnvConfig::UninformedSeparation { chi: Some(1), eps },
                EnvConfig::UninformedSeparation { chi: Some(-1), eps },
            ],
            _ => vec![self.clone()],
        }
    }

    /// Realizes the environment for `graph` (which fixes `K` and, for the
    /// graph-dependent constructions, the roles of the vertices).
    pub fn build(&self, graph: &FeedbackGraph, horizon: usize, seed: u64) -> Result<Environment> {
        let k = graph.num_vertices();
        match self {
            EnvConfig::Table(table) => {
                if table.num_actions() != k || table.horizon() < horizon {
                    return Err(Error::DimensionMismatch(format!(
                        "loss table is {}x{}, game needs {horizon}x{k}",
                        table.horizon(),
                        table.num_actions()
                    )));
                }
                let rows = table.rows().take(horizon).map(<[f64]>::to_vec).collect();
                Ok(Environment::fixed_table(LossTable::from_rows(rows)?))
            }
            EnvConfig::Bernoulli { mu } => {
                if mu.len() != k {
                    return Err(Error::DimensionMismatch(format!(
                        "{} means for {k} actions",
                        mu.len()
                    )));
                }
                Environment::bernoulli(mu, horizon, seed)
            }
            EnvConfig::NonObservable { chi } => {
                if graph.classify_vertex(0)? != VertexTag::Unobservable {
                    return Err(Error::WrongClass(
                        "the non-observable construction needs vertex 1 unobservable".into(),
                    ));
                }
                Environment::nonobservable(k, chi.unwrap_or_else(|| seeded_bit(seed)), horizon)
            }
            EnvConfig::WeakLower { eps } => Environment::weak_lower(graph, horizon, seed, *eps),
            EnvConfig::SimpleWeak { chi, eps } => {
                let roles = WeakRoles::find(graph)?;
                roles.validate(graph)?;
                let chi = chi.unwrap_or_else(|| seeded_sign(seed));
                Environment::simple_weak(k, horizon, chi, roles, seed, *eps)
            }
            EnvConfig::UninformedSeparation { chi, eps } => {
                let chi = chi.unwrap_or_else(|| seeded_sign(seed));
                Environment::uninformed_separation(k, horizon, chi, seed, *eps)
            }
        }
    }
}

fn seeded_bit(seed: u64) -> u8 {
    u8::from(stream_rng(seed, CONSTRUCTION_STREAM).random_bool(0.5))
}

fn seeded_sign(seed: u64) -> i8 {
    if seeded_bit(seed) == 1 {
        1
    } else {
        -1
    }
}

fn two_arm_means(num_actions: usize, chi: i8, roles: WeakRoles, eps: f64) -> Result<Vec<f64>> {
    if chi != 1 && chi != -1 {
        return Err(Error::invalid(format!("chi must be +1 or -1, got {chi}")));
    }
    if roles.weak >= num_actions || roles.blind >= num_actions || roles.weak == roles.blind {
        return Err(Error::invalid("invalid weak/blind vertex pair"));
    }
    let mut mu = vec![1.0; num_actions];
    mu[roles.weak] = 0.5 - eps * f64::from(chi);
    mu[roles.blind] = 0.5;
    Ok(mu)
}

fn bernoulli_table(mu: &[f64], horizon: usize, rng: &mut GameRng) -> Result<LossTable> {
    let mut data = Vec::with_capacity(horizon * mu.len());
    for _ in 0..horizon {
        data.extend(mu.iter().map(|&m| if unit(rng) < m { 1.0 } else { 0.0 }));
    }
    LossTable::from_flat(horizon, mu.len(), data)
}

fn check_means(mu: &[f64]) -> Result<()> {
    if mu.is_empty() {
        return Err(Error::invalid("need at least one mean"));
    }
    if let Some(m) = mu.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(Error::invalid(format!("mean {m} outside [0, 1]")));
    }
    Ok(())
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        Err(Error::invalid("horizon must be positive"))
    } else {
        Ok(())
    }
}

fn check_gap(eps: f64) -> Result<f64> {
    if eps > 0.0 && eps <= 0.5 {
        Ok(eps)
    } else {
        Err(Error::invalid(format!("gap {eps} must lie in (0, 1/2]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{catalog, independence_number, weak_domination_number, CatalogGraph};

    #[test]
    fn table_replays() {
        let t = LossTable::from_rows(vec![vec![0.0, 1.0]]).unwrap();
        let env = Environment::fixed_table(t.clone());
        assert_eq!(env.losses().row(0), &[0.0, 1.0]);
        assert_eq!(env.losses(), &t);
    }

    #[test]
    fn bernoulli_constant_and_seeded() {
        let env = Environment::bernoulli(&[0.0, 1.0], 50, 3).unwrap();
        assert!(env.losses().rows().all(|r| r == [0.0, 1.0]));
        let a = Environment::bernoulli(&[0.5, 0.3], 200, 9).unwrap();
        let b = Environment::bernoulli(&[0.5, 0.3], 200, 9).unwrap();
        assert_eq!(a.losses(), b.losses());
        assert!(Environment::bernoulli(&[1.5], 10, 0).is_err());
    }

    #[test]
    fn bernoulli_mean_within_three_sigma() {
        let t = 100_000;
        let env = Environment::bernoulli(&[0.5; 3], t, 42).unwrap();
        let sigma = (0.25 / t as f64).sqrt();
        for s in env.losses().column_sums() {
            assert!((s / t as f64 - 0.5).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn nonobservable_values() {
        let env = Environment::nonobservable(3, 1, 10).unwrap();
        assert_eq!(env.losses().column_sums(), vec![10.0, 5.0, 5.0]);
        let env = Environment::nonobservable(3, 0, 10).unwrap();
        assert_eq!(env.losses().column_sums()[0], 0.0);
        assert!(Environment::nonobservable(3, 2, 10).is_err());
    }

    #[test]
    fn simple_weak_means() {
        let env = Environment::simple_weak(4, 8000, 1, WeakRoles::CANONICAL, 0, None).unwrap();
        assert!((env.eps().unwrap() - 0.025).abs() < 1e-12);
        assert_eq!(env.means().unwrap(), &[0.475, 0.5, 1.0, 1.0]);
        let env = Environment::simple_weak(4, 8000, -1, WeakRoles::CANONICAL, 0, None).unwrap();
        assert_eq!(env.means().unwrap()[0], 0.525);
        assert!(Environment::simple_weak(2, 10, 1, WeakRoles::CANONICAL, 0, None).is_err());
        assert!(Environment::simple_weak(4, 10, 0, WeakRoles::CANONICAL, 0, None).is_err());
        // T = 1 would give 1/2; clipped.
        assert_eq!(simple_weak_gap(1), 0.25);
    }

    #[test]
    fn roles_on_clique_minus() {
        let g = catalog(CatalogGraph::CliqueMinus, 5).unwrap();
        let roles = WeakRoles::find(&g).unwrap();
        assert_eq!(roles, WeakRoles { weak: 0, blind: 4 });
        roles.validate(&g).unwrap();
        assert!(WeakRoles::CANONICAL.validate(&g).is_err());
    }

    #[test]
    fn uninformed_graphs_and_gap() {
        assert!((uninformed_gap(8, 512) - 1.0 / 16.0).abs() < 1e-15);
        let env = Environment::uninformed_separation(6, 300, 1, 5, None).unwrap();
        let seq = env.graphs().unwrap();
        assert_eq!(seq.horizon(), 300);
        for g in seq.palette() {
            assert_eq!(g.classify(), Observability::WeaklyObservable);
            assert_eq!(independence_number(g).unwrap().size, 1);
            assert_eq!(weak_domination_number(g).size, 1);
        }
        for t in 0..300 {
            let g = seq.graph(t);
            assert_eq!(g.in_neighbors(0).len(), 1);
            assert!(g.in_neighbors(0)[0] >= 2);
        }
        let hits: std::collections::HashSet<_> = (0..300).map(|t| seq.index(t)).collect();
        assert_eq!(hits.len(), 4);
        assert!(Environment::uninformed_separation(3, 10, 1, 0, None).is_err());
    }

    #[test]
    fn weak_lower_falls_back_on_small_sets() {
        let g = catalog(CatalogGraph::CliqueMinus, 4).unwrap();
        let env = Environment::weak_lower(&g, 1000, 1, None).unwrap();
        assert_eq!(env.kind(), EnvKind::SimpleWeak);
        assert!(Environment::weak_lower(&catalog(CatalogGraph::Bandit, 3).unwrap(), 10, 0, None)
            .is_err());
    }

    #[test]
    fn weak_lower_on_spread_set() {
        // Looped dominators 0..3 each privately revealing one weak vertex.
        let mut edges = Vec::new();
        for i in 0..4 {
            edges.push((i, i));
            edges.push((i, i + 4));
        }
        let g = FeedbackGraph::from_edges(8, edges).unwrap();
        let env = Environment::weak_lower(&g, 4096, 7, None).unwrap();
        assert_eq!(env.kind(), EnvKind::WeakLower);
        let u = env.support().unwrap();
        assert!(u.len() >= 2);
        let mu = env.means().unwrap();
        let chi = env.chi().unwrap() as usize;
        let eps = weak_lower_gap(u.len(), 8, 4096);
        assert_eq!(env.eps(), Some(eps));
        for i in 0..8 {
            let expect = if i == chi {
                0.5 - eps
            } else if u.contains(&i) {
                0.5
            } else {
                1.0
            };
            assert_eq!(mu[i], expect);
        }
        for (s, &m) in env.losses().column_sums().iter().zip(mu) {
            let sigma = (m * (1.0 - m) / 4096.0).sqrt();
            assert!((s / 4096.0 - m).abs() <= 3.0 * sigma + 1e-12);
        }
    }

    #[test]
    fn config_variants_and_checks() {
        assert_eq!(EnvConfig::NonObservable { chi: None }.chi_variants().len(), 2);
        assert_eq!(EnvConfig::Bernoulli { mu: vec![0.5] }.chi_variants().len(), 1);
        let bandit = catalog(CatalogGraph::Bandit, 3).unwrap();
        assert!(EnvConfig::NonObservable { chi: Some(0) }.build(&bandit, 10, 0).is_err());
        assert!(EnvConfig::Bernoulli { mu: vec![0.5] }.build(&bandit, 10, 0).is_err());
        let table = Arc::new(LossTable::from_rows(vec![vec![0.0; 3]; 5]).unwrap());
        let env = EnvConfig::Table(table.clone()).build(&bandit, 3, 0).unwrap();
        assert_eq!(env.horizon(), 3);
        assert!(EnvConfig::Table(table).build(&bandit, 6, 0).is_err());
    }
}
