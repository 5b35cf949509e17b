use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use graphbandit::environments::{EnvConfig, LossTable};
use graphbandit::graph::{catalog, predict_rate, profile, CatalogGraph, FeedbackGraph};
use graphbandit::harness::{
    doubling_wrapper, expected_regret_thm4, run_game, sweep, GameTranscript, GraphSource,
    LearnerConfig, LearnerKind, PresetKind, SweepConfig,
};
use graphbandit::learners::Mode;
use graphbandit::partial_monitoring::{
    check_global_observability, check_local_observability, claim_c1_all, encode,
};
use graphbandit::rng::repetition_seed;

use crate::{Command, GameArgs, GraphArgs};

pub fn dispatch(command: Command) -> Result<()> {
    let mut out = io::stdout().lock();
    match command {
        Command::Classify(graph) => {
            let (_, g) = load_graph(&graph)?;
            writeln!(out, "class={}", g.classify())?;
            writeln!(out, "weak_set={}", one_based(&g.weak_set()))?;
        }
        Command::Profile { graph, horizon } => {
            let (_, g) = load_graph(&graph)?;
            let p = profile(&g)?;
            writeln!(out, "K={}", p.num_vertices)?;
            writeln!(out, "class={}", p.class)?;
            writeln!(out, "alpha={}", p.alpha)?;
            writeln!(out, "alpha_witness={}", one_based(&p.alpha_witness))?;
            match p.delta {
                Some(d) => writeln!(out, "delta={d}")?,
                None => writeln!(out, "delta=na")?,
            }
            writeln!(out, "delta_witness={}", one_based(&p.delta_witness))?;
            writeln!(out, "delta_exact={}", p.delta_exact)?;
            if p.num_vertices >= 2 {
                let rate = predict_rate(&p, horizon)?;
                writeln!(out, "rate_class={}", rate.class)?;
                writeln!(out, "rate_formula={}", rate.formula)?;
                writeln!(out, "rate_value={}", rate.value)?;
            }
        }
        Command::Run {
            graph,
            game,
            horizon,
            seed,
            doubling,
            transcript,
        } => run(&mut out, &graph, &game, horizon, seed, doubling, transcript.as_deref())?,
        Command::Sweep {
            graph,
            game,
            horizons,
            reps,
            seed,
            out: path,
        } => {
            configure_threads()?;
            let (name, g) = game_graph(&graph, &game)?;
            let cfg = SweepConfig {
                graph_name: name,
                graph: Arc::new(g),
                learner: learner_config(&game)?,
                env: env_config(&game)?,
                horizons,
                reps,
                seed,
            };
            let report = sweep(&cfg)?;
            match path {
                Some(p) => {
                    let file = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    report.write_csv(BufWriter::new(file))?;
                    for s in &report.summaries {
                        writeln!(
                            out,
                            "T={} mean_regret={} stderr={}",
                            s.horizon, s.mean_regret, s.stderr
                        )?;
                    }
                    match report.slope {
                        Some(s) => writeln!(out, "slope={s}")?,
                        None => writeln!(out, "slope=na")?,
                    }
                }
                None => report.write_csv(&mut out)?,
            }
        }
        Command::Lowerbound {
            env,
            k,
            horizon,
            reps,
            seed,
        } => {
            configure_threads()?;
            let which: Vec<&str> = match env.as_deref() {
                Some(e) => vec![e],
                None => vec!["thm4", "thm8", "thm7"],
            };
            for e in which {
                lowerbound(&mut out, e, k, horizon, reps, seed)?;
            }
        }
        Command::PmCheck { graph, dump } => {
            let (_, g) = load_graph(&graph)?;
            let inst = encode(&g)?;
            writeln!(out, "global={}", check_global_observability(&inst))?;
            writeln!(out, "local={}", check_local_observability(&inst))?;
            writeln!(out, "claimC1={}", claim_c1_all(&inst))?;
            if let Some(dir) = dump {
                fs::create_dir_all(&dir)?;
                inst.write_loss_csv(BufWriter::new(File::create(dir.join("L.csv"))?))?;
                inst.write_symbols_csv(BufWriter::new(File::create(dir.join("H.csv"))?))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn one_based(vs: &[usize]) -> String {
    vs.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn load_graph(args: &GraphArgs) -> Result<(String, FeedbackGraph)> {
    match (&args.file, &args.catalog) {
        (Some(_), Some(_)) => bail!("give either a graph file or --catalog, not both"),
        (Some(path), None) => {
            if args.k.is_some() {
                bail!("--k only applies to catalog graphs");
            }
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let g: FeedbackGraph = text
                .parse()
                .with_context(|| format!("parsing {}", path.display()))?;
            let name = path
                .file_stem()
                .map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned());
            Ok((name, g))
        }
        (None, Some(name)) => {
            let which: CatalogGraph = name.parse()?;
            let k = match (which, args.k) {
                (CatalogGraph::AppleTasting, None) => 2,
                (_, Some(k)) => k,
                (_, None) => bail!("--catalog needs --k"),
            };
            Ok((which.name().to_string(), catalog(which, k)?))
        }
        (None, None) => bail!("give a graph file or --catalog with --k"),
    }
}

/// The uninformed construction brings its own graphs; only `K` is needed.
fn game_graph(graph: &GraphArgs, game: &GameArgs) -> Result<(String, FeedbackGraph)> {
    if game.env == "thm7" && graph.file.is_none() && graph.catalog.is_none() {
        let k = graph.k.context("--env thm7 needs --k (or a graph)")?;
        return Ok(("thm7".into(), catalog(CatalogGraph::Full, k)?));
    }
    load_graph(graph)
}

fn learner_config(game: &GameArgs) -> Result<LearnerConfig> {
    let kind = match game.learner.as_str() {
        "exp3g" => LearnerKind::Exp3G,
        "hedge" => LearnerKind::Hedge,
        "uniform" => LearnerKind::Uniform,
        "fixed" => {
            if game.arm == 0 {
                bail!("--arm is 1-based");
            }
            LearnerKind::FixedArm(game.arm - 1)
        }
        other => bail!("unknown learner `{other}`"),
    };
    let preset: PresetKind = game.preset.parse()?;
    if preset == PresetKind::Manual && game.eta.is_none() {
        bail!("--preset manual needs --eta");
    }
    Ok(LearnerConfig {
        kind,
        preset,
        mode: game.mode.parse::<Mode>()?,
        eta: game.eta,
        gamma: game.gamma,
    })
}

fn env_config(game: &GameArgs) -> Result<EnvConfig> {
    let unused = |flag: &str, set: bool| -> Result<()> {
        if set {
            bail!("{flag} does not apply to --env {}", game.env);
        }
        Ok(())
    };
    let sign = || -> Result<Option<i8>> {
        match game.chi {
            None => Ok(None),
            Some(c @ (1 | -1)) => Ok(Some(c)),
            Some(c) => bail!("--chi must be 1 or -1 for --env {}, got {c}", game.env),
        }
    };
    if game.env != "table" {
        unused("--table", game.table.is_some())?;
    }
    if game.env != "bernoulli" {
        unused("--mu", game.mu.is_some())?;
    }
    Ok(match game.env.as_str() {
        "table" => {
            unused("--chi", game.chi.is_some())?;
            unused("--eps", game.eps.is_some())?;
            let path = game.table.as_ref().context("--env table needs --table")?;
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            EnvConfig::Table(Arc::new(LossTable::read_csv(file)?))
        }
        "bernoulli" => {
            unused("--chi", game.chi.is_some())?;
            unused("--eps", game.eps.is_some())?;
            EnvConfig::Bernoulli {
                mu: game.mu.clone().context("--env bernoulli needs --mu")?,
            }
        }
        "thm4" => {
            unused("--eps", game.eps.is_some())?;
            let chi = match game.chi {
                None => None,
                Some(c @ (0 | 1)) => Some(c as u8),
                Some(c) => bail!("--chi must be 0 or 1 for --env thm4, got {c}"),
            };
            EnvConfig::NonObservable { chi }
        }
        "thm5" => {
            unused("--chi", game.chi.is_some())?;
            EnvConfig::WeakLower { eps: game.eps }
        }
        "thm8" => EnvConfig::SimpleWeak {
            chi: sign()?,
            eps: game.eps,
        },
        "thm7" => EnvConfig::UninformedSeparation {
            chi: sign()?,
            eps: game.eps,
        },
        other => bail!("unknown environment `{other}`"),
    })
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("GRAPHBANDIT_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("GRAPHBANDIT_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            bail!("GRAPHBANDIT_THREADS must be positive");
        }
        // A second configuration attempt in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn write_transcript(path: &Path, tr: &GameTranscript) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(w, "t,action,loss,observed")?;
    for r in &tr.rounds {
        writeln!(w, "{},{},{},{}", r.t, r.action + 1, r.loss, r.observed)?;
    }
    w.flush()?;
    Ok(())
}

fn run(
    out: &mut impl Write,
    graph: &GraphArgs,
    game: &GameArgs,
    horizon: usize,
    seed: u64,
    doubling: bool,
    transcript: Option<&Path>,
) -> Result<()> {
    let (_, g) = game_graph(graph, game)?;
    let g = Arc::new(g);
    let learner = learner_config(game)?;
    let env = env_config(game)?;
    if doubling && (learner.mode != Mode::Informed || learner.kind != LearnerKind::Exp3G) {
        bail!("--doubling needs --learner exp3g --mode informed");
    }
    let variants = env.chi_variants();
    if transcript.is_some() && variants.len() > 1 {
        bail!("--transcript needs --chi for --env {}", game.env);
    }
    let mut runs = Vec::new();
    for variant in &variants {
        let realized = variant.build(&g, horizon, seed)?;
        let source = GraphSource::for_game(Arc::clone(&g), &realized, learner.mode)?;
        let tr = if doubling {
            doubling_wrapper(&source, &realized, seed)?
        } else {
            run_game(&source, &learner, &realized, seed)?
        };
        writeln!(out, "env={}", realized.kind())?;
        if let Some(chi) = realized.chi() {
            writeln!(out, "chi={chi}")?;
        }
        if let Some(eps) = realized.eps() {
            writeln!(out, "eps={eps}")?;
        }
        writeln!(out, "T={}", tr.horizon())?;
        writeln!(out, "seed={seed}")?;
        writeln!(out, "player_loss={}", tr.player_loss)?;
        writeln!(out, "best_fixed_loss={}", tr.best_fixed_loss())?;
        writeln!(out, "regret={}", tr.regret())?;
        if let Some(e) = tr.expected_regret() {
            writeln!(out, "expected_regret={e}")?;
        }
        if let Some(path) = transcript {
            write_transcript(path, &tr)?;
        }
        runs.push(tr);
    }
    if runs.len() == 2 {
        let mean = (runs[0].regret() + runs[1].regret()) / 2.0;
        writeln!(out, "mean_regret={mean}")?;
        if game.env == "thm4" {
            writeln!(out, "expected_regret_thm4={}", expected_regret_thm4(&runs[0], &runs[1])?)?;
        }
    }
    Ok(())
}

/// `K` vertices where vertex 1 has no in-edges and the rest form a clique
/// with self-loops.
fn blind_first_graph(k: usize) -> Result<FeedbackGraph> {
    let edges = (1..k).flat_map(|u| (1..k).map(move |v| (u, v)));
    Ok(FeedbackGraph::from_edges(k, edges)?)
}

fn lowerbound(
    out: &mut impl Write,
    env: &str,
    k: usize,
    horizon: usize,
    reps: usize,
    seed: u64,
) -> Result<()> {
    let t = horizon as f64;
    match env {
        "thm4" => {
            let g = Arc::new(blind_first_graph(k)?);
            let learner = LearnerConfig::exp3g(PresetKind::Auto, Mode::Fixed);
            let mut total = 0.0;
            for rep in 0..reps {
                let s = repetition_seed(seed, rep as u64);
                let pair = [0u8, 1]
                    .iter()
                    .map(|&chi| {
                        let e = EnvConfig::NonObservable { chi: Some(chi) }.build(&g, horizon, s)?;
                        Ok(run_game(&GraphSource::Fixed(Arc::clone(&g)), &learner, &e, s)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                total += expected_regret_thm4(&pair[0], &pair[1])?;
            }
            writeln!(out, "env=thm4 K={k} T={horizon} reps={reps} expected_regret={} bound_formula=T/4 bound_value={}", total / reps as f64, t / 4.0)?;
        }
        "thm8" | "thm7" => {
            let (name, g, learner, env_cfg, formula, value) = if env == "thm8" {
                (
                    "clique_minus",
                    catalog(CatalogGraph::CliqueMinus, k)?,
                    LearnerConfig::exp3g(PresetKind::Weak, Mode::Fixed),
                    EnvConfig::SimpleWeak { chi: None, eps: None },
                    "T^(2/3)/8",
                    t.powf(2.0 / 3.0) / 8.0,
                )
            } else {
                (
                    "thm7",
                    catalog(CatalogGraph::Full, k)?,
                    LearnerConfig::exp3g(PresetKind::Uninformed, Mode::Uninformed),
                    EnvConfig::UninformedSeparation { chi: None, eps: None },
                    "K^(1/3)*T^(2/3)/16",
                    (k as f64).cbrt() * t.powf(2.0 / 3.0) / 16.0,
                )
            };
            let report = sweep(&SweepConfig {
                graph_name: name.into(),
                graph: Arc::new(g),
                learner,
                env: env_cfg,
                horizons: vec![horizon],
                reps,
                seed,
            })?;
            let s = &report.summaries[0];
            writeln!(out, "env={env} K={k} T={horizon} reps={reps} mean_regret={} stderr={} bound_formula={formula} bound_value={value}", s.mean_regret, s.stderr)?;
        }
        other => bail!("unknown lower-bound construction `{other}`"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use clap::Parser;

    use super::*;
    use crate::Cli;

    fn run_args(extra: &[&str]) -> (GraphArgs, GameArgs) {
        let mut argv = vec!["graphbandit", "run", "--T", "10"];
        argv.extend_from_slice(extra);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Run { graph, game, .. } => (graph, game),
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn one_based_lists() {
        assert_eq!(one_based(&[0, 2, 9]), "1,3,10");
        assert_eq!(one_based(&[]), "");
    }

    #[test]
    fn catalog_loading() {
        let (g, _) = run_args(&["--catalog", "apple_tasting", "--env", "thm4"]);
        assert_eq!(load_graph(&g).unwrap().1.num_vertices(), 2);
        let (g, _) = run_args(&["--catalog", "full", "--env", "thm4"]);
        assert!(load_graph(&g).is_err());
        let (g, game) = run_args(&["--k", "6", "--env", "thm7"]);
        let (name, graph) = game_graph(&g, &game).unwrap();
        assert_eq!((name.as_str(), graph.num_vertices()), ("thm7", 6));
    }

    #[test]
    fn learner_flags() {
        let (_, game) = run_args(&["--env", "thm4", "--learner", "fixed", "--arm", "2"]);
        assert_eq!(learner_config(&game).unwrap().kind, LearnerKind::FixedArm(1));
        let (_, game) = run_args(&["--env", "thm4", "--learner", "fixed", "--arm", "0"]);
        assert!(learner_config(&game).is_err());
        let (_, game) = run_args(&["--env", "thm4", "--preset", "manual"]);
        assert!(learner_config(&game).is_err());
    }

    #[test]
    fn env_flags() {
        let (_, game) = run_args(&["--env", "thm8", "--chi", "-1"]);
        assert!(matches!(
            env_config(&game).unwrap(),
            EnvConfig::SimpleWeak { chi: Some(-1), eps: None }
        ));
        let (_, game) = run_args(&["--env", "thm4", "--chi", "2"]);
        assert!(env_config(&game).is_err());
        let (_, game) = run_args(&["--env", "bernoulli", "--mu", "0.5", "--chi", "1"]);
        assert!(env_config(&game).is_err());
        let (_, game) = run_args(&["--env", "thm5", "--mu", "0.5"]);
        assert!(env_config(&game).is_err());
    }
}
