//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.
//!
//! cargo test --release -p graphbandit --test acceptance

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use graphbandit::environments::{lemma3_construct, EnvConfig, LossTable};
use graphbandit::graph::{
    catalog, independence_number, lemma2_bound, lemma2_lhs, weak_domination_number, CatalogGraph,
    FeedbackGraph, Observability,
};
use graphbandit::harness::{
    expected_regret_thm4, run_game, sweep, ExperimentReport, GraphSource, LearnerConfig,
    LearnerKind, PresetKind, SweepConfig,
};
use graphbandit::learners::{
    hedge_second_order_bound, importance_weighted_estimates, FeedbackEvent, Mode,
};
use graphbandit::partial_monitoring::{
    check_global_observability, check_local_observability, claim_c1_check, encode,
};
use graphbandit::rng::{stream_rng, GameRng};
use rand::Rng;

use common::{blind_first, brute_alpha, brute_delta, brute_spread_check, random_graph};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.2}s of {}s budget", elapsed.as_secs_f64(), limit.as_secs())
}

fn nonobservable_average() -> Outcome {
    let g = Arc::new(blind_first(3));
    let src = GraphSource::Fixed(Arc::clone(&g));
    let learners = [
        ("exp3g", LearnerConfig::exp3g(PresetKind::Auto, Mode::Fixed)),
        ("uniform", LearnerConfig::baseline(LearnerKind::Uniform)),
        ("always-arm-1", LearnerConfig::baseline(LearnerKind::FixedArm(0))),
    ];
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    for (name, cfg) in &learners {
        let pair: Vec<_> = [0u8, 1]
            .iter()
            .map(|&chi| {
                let env = EnvConfig::NonObservable { chi: Some(chi) }
                    .build(&g, 1000, 77)
                    .unwrap();
                run_game(&src, cfg, &env, 77).unwrap()
            })
            .collect();
        let r = expected_regret_thm4(&pair[0], &pair[1]).unwrap();
        worst = worst.max((r - 250.0).abs());
        values.push(format!("{name}={r}"));
    }
    outcome(worst <= 1e-9, values.join(" "))
}

fn second_order_bound() -> Outcome {
    let mut rng = stream_rng(101, 9);
    let mut violations = 0;
    let mut refined_above = 0;
    for _ in 0..1000 {
        let k = rng.random_range(1..=10);
        let t = rng.random_range(1..=50);
        let eta = rng.random_range(0.05..2.0);
        let scale = rng.random_range(0.1..3.0);
        let losses: Vec<Vec<f64>> = (0..t)
            .map(|_| (0..k).map(|_| rng.random_range(0.0..scale)).collect())
            .collect();
        let subsets: Vec<Vec<usize>> = losses
            .iter()
            .map(|row| {
                (0..k)
                    .filter(|&i| row[i] <= 1.0 / eta && rng.random_bool(0.6))
                    .collect()
            })
            .collect();
        let empty = vec![Vec::new(); t];
        for comparator in 0..k {
            let b = hedge_second_order_bound(&losses, &subsets, eta, comparator).unwrap();
            if b.lhs > b.rhs + 1e-9 {
                violations += 1;
            }
            if b.rhs > b.standard_rhs + 1e-9 {
                refined_above += 1;
            }
            let plain = hedge_second_order_bound(&losses, &empty, eta, comparator).unwrap();
            if plain.lhs > plain.standard_rhs + 1e-9 || plain.rhs > plain.standard_rhs + 1e-9 {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0 && refined_above == 0,
        format!("1000 instances, {violations} bound violations, {refined_above} refined > standard"),
    )
}

fn estimator_unbiased() -> Outcome {
    let mut rng = stream_rng(202, 9);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for _ in 0..500 {
        let k = rng.random_range(1..=8);
        let density = rng.random_range(0.1..0.9);
        let g = Arc::new(random_graph(&mut rng, k, density, 0.5));
        let mut p: Vec<f64> = (0..k)
            .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.01..1.0) })
            .collect();
        if p.iter().all(|&x| x == 0.0) {
            p[0] = 1.0;
        }
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        let losses: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..=1.0)).collect();
        let mut expectation = vec![0.0; k];
        for j in (0..k).filter(|&j| p[j] > 0.0) {
            let ev = FeedbackEvent::observe(&g, j, &losses, false).unwrap();
            let est = importance_weighted_estimates(&g, &p, &ev).unwrap();
            for i in 0..k {
                expectation[i] += p[j] * est[i];
            }
        }
        for i in 0..k {
            let prob: f64 = g.in_neighbors(i).iter().map(|&j| p[j]).sum();
            if prob > 0.0 {
                worst = worst.max((expectation[i] - losses[i]).abs());
                checked += 1;
            }
        }
    }
    outcome(worst <= 1e-12, format!("{checked} (triple, arm) checks, max error {worst:.2e}"))
}

fn solver_oracles() -> Outcome {
    let mut rng = stream_rng(303, 9);
    let mut mismatches = 0;
    for n in 0..200 {
        let k = 1 + n % 12;
        let density = rng.random_range(0.05..0.7);
        let loops = rng.random_range(0.0..1.0);
        let g = random_graph(&mut rng, k, density, loops);
        if independence_number(&g).unwrap().size != brute_alpha(&g) {
            mismatches += 1;
        }
        if Some(weak_domination_number(&g).size) != brute_delta(&g) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("200 graphs, {mismatches} mismatches"))
}

fn rate_grid() -> Vec<usize> {
    (9..=14).map(|e| 1usize << e).collect()
}

fn strong_sweep() -> ExperimentReport {
    let k = 10;
    let mut mu = vec![0.5; k];
    mu[1] = 0.3;
    sweep(&SweepConfig {
        graph_name: "loopy_star".into(),
        graph: Arc::new(catalog(CatalogGraph::LoopyStar, k).unwrap()),
        learner: LearnerConfig::exp3g(PresetKind::Strong, Mode::Fixed),
        env: EnvConfig::Bernoulli { mu },
        horizons: rate_grid(),
        reps: 32,
        seed: 2024,
    })
    .unwrap()
}

fn weak_sweep() -> ExperimentReport {
    sweep(&SweepConfig {
        graph_name: "clique_minus".into(),
        graph: Arc::new(catalog(CatalogGraph::CliqueMinus, 10).unwrap()),
        learner: LearnerConfig::exp3g(PresetKind::Weak, Mode::Fixed),
        env: EnvConfig::SimpleWeak { chi: None, eps: None },
        horizons: rate_grid(),
        reps: 32,
        seed: 2024,
    })
    .unwrap()
}

fn rate_separation() -> Outcome {
    let strong = strong_sweep();
    let weak = weak_sweep();
    let alpha = strong.profile.alpha as f64;
    let k = strong.profile.num_vertices as f64;
    let strong_slope = strong.slope.unwrap_or(f64::NAN);
    let weak_slope = weak.slope.unwrap_or(f64::NAN);
    let under_envelope = strong.summaries.iter().all(|s| {
        let t = s.horizon as f64;
        s.mean_regret <= 40.0 * (alpha * t * (k * t).ln()).sqrt()
    });
    let a = strong_slope <= 0.65 && under_envelope;
    let b = weak_slope >= 0.55;
    let top = 1 << 14;
    let ratio = weak.summary(top).unwrap().mean_regret / strong.summary(top).unwrap().mean_regret;
    let c = ratio >= 3.0;
    outcome(
        a && b && c,
        format!(
            "(a) strong slope {strong_slope:.3} envelope {} -> {}; (b) weak slope {weak_slope:.3} -> {}; (c) weak/strong at T=2^14 {ratio:.2} (need >= 3) -> {}",
            if under_envelope { "ok" } else { "exceeded" },
            verdict(a),
            verdict(b),
            verdict(c)
        ),
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Twenty deterministic and random loss tables for `k` arms.
fn adversarial_tables(k: usize, t: usize, rng: &mut GameRng) -> Vec<(String, LossTable)> {
    let build = |f: &dyn Fn(usize, usize) -> f64| {
        LossTable::from_rows((0..t).map(|r| (0..k).map(|i| f(r, i)).collect()).collect()).unwrap()
    };
    let mut out: Vec<(String, LossTable)> = vec![
        ("all-zero".into(), build(&|_, _| 0.0)),
        ("all-one".into(), build(&|_, _| 1.0)),
        ("constant-half".into(), build(&|_, _| 0.5)),
        ("good-first".into(), build(&|_, i| if i == 0 { 0.0 } else { 1.0 })),
        ("good-last".into(), build(&|_, i| if i == k - 1 { 0.0 } else { 1.0 })),
        ("alternating".into(), build(&|r, i| ((r + i) % 2) as f64)),
        (
            "alternating-pair".into(),
            build(&|r, i| match i {
                0 => (r % 2) as f64,
                1 => ((r + 1) % 2) as f64,
                _ => 1.0,
            }),
        ),
        (
            "switch-half".into(),
            build(&|r, i| {
                let good = if r < t / 2 { 0 } else { k - 1 };
                if i == good {
                    0.0
                } else {
                    1.0
                }
            }),
        ),
        (
            "switch-thirds".into(),
            build(&|r, i| if i == (3 * r / t) % k { 0.0 } else { 1.0 }),
        ),
        (
            "blocks".into(),
            build(&|r, i| if (r / 100 + i) % 2 == 0 { 0.0 } else { 1.0 }),
        ),
        ("staircase".into(), build(&|_, i| i as f64 / (k - 1) as f64)),
        (
            "late-bloomer".into(),
            build(&|r, i| {
                if i == k - 1 {
                    if r < t / 4 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    0.4
                }
            }),
        ),
        (
            "sawtooth".into(),
            build(&|r, i| ((r + 37 * i) % 50) as f64 / 49.0),
        ),
        (
            "near-tie".into(),
            build(&|_, i| if i == 1 { 0.45 } else { 0.5 }),
        ),
    ];
    for (name, gap) in [("random-gap-0.1", 0.1), ("random-gap-0.3", 0.3), ("random-no-gap", 0.0)] {
        let rows = (0..t)
            .map(|_| {
                (0..k)
                    .map(|i| {
                        let mean = if i == 0 { 0.5 - gap } else { 0.5 };
                        if rng.random_bool(mean) {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        out.push((name.into(), LossTable::from_rows(rows).unwrap()));
    }
    for name in ["uniform-noise", "one-hot-random", "sparse-zero"] {
        let rows = (0..t)
            .map(|_| match name {
                "uniform-noise" => (0..k).map(|_| rng.random_range(0.0..=1.0)).collect(),
                "one-hot-random" => {
                    let hot = rng.random_range(0..k);
                    (0..k).map(|i| if i == hot { 1.0 } else { 0.0 }).collect()
                }
                _ => {
                    let cold = rng.random_range(0..k);
                    (0..k).map(|i| if i == cold { 0.0 } else { 1.0 }).collect()
                }
            })
            .collect();
        out.push((name.into(), LossTable::from_rows(rows).unwrap()));
    }
    out
}

fn loopless_clique_bound() -> Outcome {
    let t = 10_000;
    let mut rng = stream_rng(404, 9);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_name = String::new();
    let mut count = 0;
    for k in [4, 16] {
        let g = Arc::new(catalog(CatalogGraph::LooplessClique, k).unwrap());
        let src = GraphSource::Fixed(Arc::clone(&g));
        let cfg = LearnerConfig::exp3g(PresetKind::LooplessClique, Mode::Fixed);
        let bound = 5.0 * (t as f64 * (k as f64).ln()).sqrt();
        for (idx, (name, table)) in adversarial_tables(k, t, &mut rng).into_iter().enumerate() {
            let env = EnvConfig::Table(Arc::new(table)).build(&g, t, 0).unwrap();
            let tr = run_game(&src, &cfg, &env, 500 + idx as u64).unwrap();
            let ratio = tr.regret() / bound;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_name = format!("{name} K={k}");
            }
            count += 1;
        }
    }
    outcome(
        worst_ratio <= 1.0,
        format!("{count} instances, worst regret/bound {worst_ratio:.3} ({worst_name})"),
    )
}

fn uninformed_sweep(k: usize, horizons: Vec<usize>) -> ExperimentReport {
    sweep(&SweepConfig {
        graph_name: "separation".into(),
        graph: Arc::new(catalog(CatalogGraph::Full, k).unwrap()),
        learner: LearnerConfig::exp3g(PresetKind::Uninformed, Mode::Uninformed),
        env: EnvConfig::UninformedSeparation { chi: None, eps: None },
        horizons,
        reps: 32,
        seed: 2024,
    })
    .unwrap()
}

fn uninformed_separation() -> Outcome {
    let small = uninformed_sweep(4, vec![1 << 12]).summaries[0].mean_regret;
    let large = uninformed_sweep(16, vec![1 << 12]).summaries[0].mean_regret;
    let slope = uninformed_sweep(8, (9..=13).map(|e| 1usize << e).collect())
        .slope
        .unwrap_or(f64::NAN);
    outcome(
        large > small && slope >= 0.55,
        format!("mean regret K=4 {small:.1}, K=16 {large:.1}; slope at K=8 {slope:.3}"),
    )
}

fn partial_monitoring() -> Outcome {
    let mut graphs: Vec<FeedbackGraph> = Vec::new();
    for name in CatalogGraph::ALL {
        let ks: Vec<usize> = if name == CatalogGraph::AppleTasting {
            vec![2]
        } else {
            (name.min_vertices().max(1)..=5).collect()
        };
        for k in ks {
            graphs.push(catalog(name, k).unwrap());
        }
    }
    let catalog_count = graphs.len();
    let mut rng = stream_rng(505, 9);
    for n in 0..50 {
        let k = 2 + n % 5;
        let density = rng.random_range(0.1..0.8);
        let loops = rng.random_range(0.0..1.0);
        graphs.push(random_graph(&mut rng, k, density, loops));
    }
    let mut failures = Vec::new();
    let (mut strong, mut observable) = (0, 0);
    for (idx, g) in graphs.iter().enumerate() {
        let inst = encode(g).unwrap();
        let c1 = g.edges().all(|(i, j)| claim_c1_check(&inst, i, j).unwrap());
        let class = g.classify();
        let local_ok = class != Observability::StronglyObservable || check_local_observability(&inst);
        let global_ok = !class.is_observable() || check_global_observability(&inst);
        strong += usize::from(class == Observability::StronglyObservable);
        observable += usize::from(class.is_observable());
        if !(c1 && local_ok && global_ok) {
            failures.push(idx);
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{catalog_count} catalog + 50 random graphs ({strong} strongly, {observable} observable), failures at {failures:?}"
        ),
    )
}

fn weighted_inequality() -> Outcome {
    let mut rng = stream_rng(606, 9);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let k = rng.random_range(1..=10);
        let density = rng.random_range(0.0..0.9);
        let loops = rng.random_range(0.0..1.0);
        let g = random_graph(&mut rng, k, density, loops);
        let eps_max = (1.0 / k as f64).min(0.5);
        let eps = rng.random_range(1e-4..eps_max) * 0.999;
        let slack = (1.0 - k as f64 * eps) * rng.random_range(0.0..=1.0);
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        let w: Vec<f64> = raw.iter().map(|r| eps + slack * r / total).collect();
        let lhs = lemma2_lhs(&g, &w, eps).unwrap();
        let alpha = independence_number(&g).unwrap().size;
        worst = worst.max(lhs - lemma2_bound(alpha, k, eps));
    }
    outcome(
        worst <= 1e-9,
        format!("1000 instances, max lhs - bound {worst:.3}"),
    )
}

fn spread_constructor() -> Outcome {
    let mut rng = stream_rng(707, 9);
    let mut built = 0;
    let mut failures = 0;
    let mut attempts = 0;
    while built < 100 {
        attempts += 1;
        let k = 3 + built % 12;
        let density = rng.random_range(0.1..0.6);
        let loops = rng.random_range(0.0..0.7);
        let g = random_graph(&mut rng, k, density, loops);
        if g.classify() != Observability::WeaklyObservable {
            continue;
        }
        let w = g.weak_set();
        let out = lemma3_construct(&g, &w, &mut rng).unwrap();
        let cap = (k as f64).ln().ceil() as usize;
        let inside = out.set.iter().all(|v| w.contains(v)) && !out.set.is_empty();
        if !(inside && brute_spread_check(&g, &out.set, cap)) {
            failures += 1;
        }
        built += 1;
    }
    outcome(
        failures == 0,
        format!("100 weakly observable graphs ({attempts} drawn), {failures} failures"),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, u64, Check); 10] = [
        ("non-observable pair averages to T/4", 1, nonobservable_average),
        ("hedge second-order bound", 10, second_order_bound),
        ("importance-weighted estimates unbiased", 5, estimator_unbiased),
        ("alpha and delta match brute force", 60, solver_oracles),
        ("strong vs weak rate separation", 600, rate_separation),
        ("loopless clique regret bound", 60, loopless_clique_bound),
        ("uninformed separation grows with K", 600, uninformed_separation),
        ("partial-monitoring encoding", 30, partial_monitoring),
        ("weighted independence inequality", 10, weighted_inequality),
        ("spread independent set constructor", 30, spread_constructor),
    ];
    let mut failed = 0;
    for (n, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(budget);
        let pass = result.pass && elapsed <= budget;
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} [{}] {name}: {} ({})",
            n + 1,
            verdict(pass),
            result.detail,
            within(elapsed, budget)
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
