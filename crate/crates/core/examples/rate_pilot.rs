//! Pilot sweeps used to calibrate the rate-separation thresholds.
//!
//! cargo run --release -p graphbandit --example rate_pilot

use std::sync::Arc;

use graphbandit::environments::EnvConfig;
use graphbandit::graph::{catalog, CatalogGraph};
use graphbandit::harness::{sweep, LearnerConfig, PresetKind, SweepConfig};
use graphbandit::learners::Mode;

fn report(label: &str, cfg: &SweepConfig) {
    let r = sweep(cfg).expect("sweep");
    println!("# {label} (alpha={}, delta={:?})", r.profile.alpha, r.profile.delta);
    for s in &r.summaries {
        println!(
            "T={:>6} mean_regret={:>9.2} stderr={:>7.2} expected={}",
            s.horizon,
            s.mean_regret,
            s.stderr,
            s.mean_expected_regret
                .map_or("na".to_string(), |e| format!("{e:.2}"))
        );
    }
    println!("slope={:?}", r.slope);
}

fn main() {
    report(
        "strong: bandit K=2, bernoulli gap 0.2",
        &SweepConfig {
            graph_name: "bandit".into(),
            graph: Arc::new(catalog(CatalogGraph::Bandit, 2).unwrap()),
            learner: LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed),
            env: EnvConfig::Bernoulli { mu: vec![0.3, 0.5] },
            horizons: (8..=13).map(|e| 1usize << e).collect(),
            reps: 32,
            seed: 2024,
        },
    );
    let grid: Vec<usize> = (9..=14).map(|e| 1usize << e).collect();
    let k = 10;
    let mut mu = vec![0.5; k];
    mu[1] = 0.3;
    report(
        "strong: loopy_star K=10, bernoulli gap 0.2",
        &SweepConfig {
            graph_name: "loopy_star".into(),
            graph: Arc::new(catalog(CatalogGraph::LoopyStar, k).unwrap()),
            learner: LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed),
            env: EnvConfig::Bernoulli { mu },
            horizons: grid.clone(),
            reps: 32,
            seed: 2024,
        },
    );
    for kw in [5, 10] {
        report(
            &format!("weak: clique_minus K={kw}, thm8 chi-averaged"),
            &SweepConfig {
                graph_name: "clique_minus".into(),
                graph: Arc::new(catalog(CatalogGraph::CliqueMinus, kw).unwrap()),
                learner: LearnerConfig::exp3g(PresetKind::Weak, Mode::Fixed),
                env: EnvConfig::SimpleWeak { chi: None, eps: None },
                horizons: grid.clone(),
                reps: 32,
                seed: 2024,
            },
        );
    }
    for kk in [4, 8, 16] {
        let horizons = if kk == 8 {
            (9..=13).map(|e| 1usize << e).collect()
        } else {
            vec![1 << 12]
        };
        report(
            &format!("uninformed: thm7 K={kk}"),
            &SweepConfig {
                graph_name: "thm7".into(),
                graph: Arc::new(catalog(CatalogGraph::Full, kk).unwrap()),
                learner: LearnerConfig::exp3g(PresetKind::Uninformed, Mode::Uninformed),
                env: EnvConfig::UninformedSeparation { chi: None, eps: None },
                horizons,
                reps: 32,
                seed: 2024,
            },
        );
    }
}
