use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use super::{run_game, GraphSource, LearnerConfig};
use crate::environments::{separation_graph, EnvConfig, EnvKind};
use crate::error::{Error, Result};
use crate::graph::{profile, FeedbackGraph, GraphProfile};
use crate::rng::repetition_seed;

/// Column order of the results CSV.
pub const RESULT_COLUMNS: [&str; 15] = [
    "graph",
    "K",
    "class",
    "alpha",
    "delta",
    "learner",
    "preset",
    "mode",
    "env",
    "T",
    "rep",
    "seed",
    "player_loss",
    "best_fixed_loss",
    "regret",
];

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub graph_name: String,
    pub graph: Arc<FeedbackGraph>,
    pub learner: LearnerConfig,
    pub env: EnvConfig,
    /// Strictly increasing.
    pub horizons: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

/// One repetition at one horizon. Losses and regrets are averaged over the
/// values of an unset `chi`, all played with the same seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub horizon: usize,
    pub rep: usize,
    pub seed: u64,
    pub player_loss: f64,
    pub best_fixed_loss: f64,
    pub regret: f64,
    pub expected_regret: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonSummary {
    pub horizon: usize,
    pub mean_regret: f64,
    pub stderr: f64,
    pub mean_expected_regret: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub graph_name: String,
    pub graph_fingerprint: u64,
    pub profile: GraphProfile,
    pub learner: String,
    pub preset: String,
    pub mode: String,
    pub env: EnvKind,
    pub horizons: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// Ordered by horizon, then repetition.
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<HorizonSummary>,
    /// Least-squares slope of `ln(mean regret)` against `ln T` over the
    /// upper half of the grid; `None` with fewer than two usable points.
    pub slope: Option<f64>,
}

impl ExperimentReport {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(RESULT_COLUMNS)?;
        let delta = self
            .profile
            .delta
            .map_or_else(|| "na".to_string(), |d| d.to_string());
        for row in &self.rows {
            w.write_record([
                self.graph_name.clone(),
                self.profile.num_vertices.to_string(),
                self.profile.class.as_str().to_string(),
                self.profile.alpha.to_string(),
                delta.clone(),
                self.learner.clone(),
                self.preset.clone(),
                self.mode.clone(),
                self.env.as_str().to_string(),
                row.horizon.to_string(),
                row.rep.to_string(),
                row.seed.to_string(),
                row.player_loss.to_string(),
                row.best_fixed_loss.to_string(),
                row.regret.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self, horizon: usize) -> Option<&HorizonSummary> {
        self.summaries.iter().find(|s| s.horizon == horizon)
    }
}

/// Sample mean and standard error of the mean (0 for a single value).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Least-squares slope of `ln y` against `ln x` over the upper half of the
/// points (at least two). Points with `y <= 0` are dropped.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let start = (n / 2).min(n - 2);
    let logs: Vec<(f64, f64)> = points[start..]
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn run_cell(cfg: &SweepConfig, horizon: usize, rep: usize) -> Result<SweepRow> {
    let seed = repetition_seed(cfg.seed, rep as u64);
    let variants = cfg.env.chi_variants();
    let mut acc = [0.0; 3];
    let mut expected = Some(0.0);
    for variant in &variants {
        let env = variant.build(&cfg.graph, horizon, seed)?;
        let source = GraphSource::for_game(Arc::clone(&cfg.graph), &env, cfg.learner.mode)?;
        let tr = run_game(&source, &cfg.learner, &env, seed)?;
        acc[0] += tr.player_loss;
        acc[1] += tr.best_fixed_loss();
        acc[2] += tr.regret();
        expected = expected.zip(tr.expected_regret()).map(|(a, b)| a + b);
    }
    let n = variants.len() as f64;
    Ok(SweepRow {
        horizon,
        rep,
        seed,
        player_loss: acc[0] / n,
        best_fixed_loss: acc[1] / n,
        regret: acc[2] / n,
        expected_regret: expected.map(|e| e / n),
    })
}

/// Runs `reps` seeded repetitions at every horizon of the grid, in
/// parallel. Repetition `r` uses seed `repetition_seed(seed, r)` at every
/// horizon.
pub fn sweep(cfg: &SweepConfig) -> Result<ExperimentReport> {
    if cfg.horizons.is_empty() {
        return Err(Error::invalid("horizon grid is empty"));
    }
    if cfg.horizons.windows(2).any(|w| w[0] >= w[1]) || cfg.horizons[0] == 0 {
        return Err(Error::invalid("horizon grid must be positive and strictly increasing"));
    }
    if cfg.reps == 0 {
        return Err(Error::invalid("need at least one repetition"));
    }
    let k = cfg.graph.num_vertices();
    let played = match cfg.env {
        EnvConfig::UninformedSeparation { .. } => separation_graph(k, 2)?,
        _ => (*cfg.graph).clone(),
    };
    let prof = profile(&played)?;

    let cells: Vec<(usize, usize)> = cfg
        .horizons
        .iter()
        .flat_map(|&t| (0..cfg.reps).map(move |r| (t, r)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(t, r)| run_cell(cfg, t, r))
        .collect::<Result<Vec<_>>>()?;

    let summaries: Vec<HorizonSummary> = cfg
        .horizons
        .iter()
        .map(|&t| {
            let cell: Vec<&SweepRow> = rows.iter().filter(|r| r.horizon == t).collect();
            let regrets: Vec<f64> = cell.iter().map(|r| r.regret).collect();
            let (mean_regret, stderr) = mean_and_stderr(&regrets);
            let expected: Option<Vec<f64>> = cell.iter().map(|r| r.expected_regret).collect();
            HorizonSummary {
                horizon: t,
                mean_regret,
                stderr,
                mean_expected_regret: expected.map(|e| mean_and_stderr(&e).0),
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = summaries
        .iter()
        .map(|s| (s.horizon as f64, s.mean_regret))
        .collect();

    Ok(ExperimentReport {
        graph_name: cfg.graph_name.clone(),
        graph_fingerprint: cfg.graph.fingerprint(),
        learner: cfg.learner.kind.as_str().to_string(),
        preset: cfg.learner.resolve_preset(&prof).as_str().to_string(),
        mode: cfg.learner.mode.as_str().to_string(),
        profile: prof,
        env: cfg.env.kind(),
        horizons: cfg.horizons.clone(),
        reps: cfg.reps,
        seed: cfg.seed,
        rows,
        summaries,
        slope: fit_slope(&points),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::LossTable;
    use crate::graph::{catalog, CatalogGraph};
    use crate::harness::{LearnerKind, PresetKind};
    use crate::learners::Mode;

    fn config(env: EnvConfig, learner: LearnerConfig) -> SweepConfig {
        SweepConfig {
            graph_name: "bandit".into(),
            graph: Arc::new(catalog(CatalogGraph::Bandit, 2).unwrap()),
            learner,
            env,
            horizons: vec![16, 64, 256],
            reps: 3,
            seed: 4,
        }
    }

    #[test]
    fn stats_helpers() {
        assert_eq!(mean_and_stderr(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_and_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, (i as f64).powf(0.5))).collect();
        assert!((fit_slope(&pts).unwrap() - 0.5).abs() < 1e-12);
        assert!(fit_slope(&[(1.0, 1.0)]).is_none());
    }

    #[test]
    fn rows_and_csv() {
        let cfg = config(
            EnvConfig::Bernoulli { mu: vec![0.4, 0.6] },
            LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed),
        );
        let report = sweep(&cfg).unwrap();
        assert_eq!(report.rows.len(), 9);
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), RESULT_COLUMNS.join(","));
        assert_eq!(lines.count(), 9);
        assert!(text.contains("bandit,2,strongly_observable,2,0,exp3g,strong,fixed,bernoulli,16,0,"));
        // Mean recomputable from raw rows.
        for s in &report.summaries {
            let vals: Vec<f64> = report
                .rows
                .iter()
                .filter(|r| r.horizon == s.horizon)
                .map(|r| r.regret)
                .collect();
            assert_eq!(mean_and_stderr(&vals), (s.mean_regret, s.stderr));
        }
    }

    #[test]
    fn deterministic_env_single_rep_has_zero_stderr() {
        let table = LossTable::from_rows(vec![vec![0.0, 1.0]; 256]).unwrap();
        let mut cfg = config(
            EnvConfig::Table(Arc::new(table)),
            LearnerConfig::baseline(LearnerKind::FixedArm(1)),
        );
        cfg.reps = 1;
        let report = sweep(&cfg).unwrap();
        assert!(report.summaries.iter().all(|s| s.stderr == 0.0));
        assert_eq!(report.summary(64).unwrap().mean_regret, 64.0);
        assert!((report.slope.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_independent() {
        let cfg = config(
            EnvConfig::Bernoulli { mu: vec![0.3, 0.5] },
            LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed),
        );
        let a = sweep(&cfg).unwrap();
        let b = sweep(&cfg).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn two_arm_bandit_slope_band() {
        let mut cfg = config(
            EnvConfig::Bernoulli { mu: vec![0.3, 0.5] },
            LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed),
        );
        cfg.horizons = (8..=13).map(|e| 1 << e).collect();
        cfg.reps = 32;
        let slope = sweep(&cfg).unwrap().slope.unwrap();
        assert!((0.3..=0.65).contains(&slope), "slope {slope}");
    }

    #[test]
    fn grid_validation() {
        let mut cfg = config(
            EnvConfig::Bernoulli { mu: vec![0.3, 0.5] },
            LearnerConfig::baseline(LearnerKind::Uniform),
        );
        cfg.horizons = vec![];
        assert!(sweep(&cfg).is_err());
        cfg.horizons = vec![10, 10];
        assert!(sweep(&cfg).is_err());
        cfg.horizons = vec![10];
        cfg.reps = 0;
        assert!(sweep(&cfg).is_err());
    }
}
