//! Command-line surface. Exit codes: 0 success, 1 validation failure,
//! 2 runtime failure.
//!
//! `--config FILE` reads a TOML file whose keys mirror the long flags, with
//! `-` written as `_`. Top-level keys hold global flags and one table per
//! subcommand holds its flags:
//!
//! ```toml
//! seed = 7
//! threads = 4
//! out_dir = "runs/a"
//!
//! [generate]
//! agents = 5000
//! homophily = 0.8
//! ```
//!
//! Flags given on the command line win over the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use crate::calibration::{
    default_stickiness_grid, sample_words, tune_global, tune_stickiness, CalibrationTarget,
    GlobalGrid,
};
use crate::engine::{run, Mode, Networks, SimulationConfig};
use crate::error::{Error, Result};
use crate::geostats::{pathway_likelihood, pathway_regression, principal_regions, PathwayMatrix};
use crate::identity::CategorySchema;
use crate::io::{
    digest, generate_world, load_world, read_usage, run_experiment, write_json, write_pathways_tsv,
    write_usage, write_world, EvaluationSettings, Evaluator, ExperimentPlan, GeneratorSpec,
    Stamped, UsageRecord, WorldBundle, WorldPaths,
};
use crate::rng;

#[derive(Debug, Parser)]
#[command(
    name = "wordspread",
    version,
    about = "Simulate and evaluate the spread of new words over identity-bearing social networks"
)]
pub struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// TOML file mirroring the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic world bundle to the output directory.
    Generate(GenerateArgs),
    /// Load and cross-check a world bundle.
    Validate(WorldArg),
    /// Run one word once and write its adoption log.
    Simulate(SimulateArgs),
    /// Tune global parameters and per-word stickiness against usage logs.
    Tune(TuneArgs),
    /// Build a county pathway matrix from usage logs.
    Pathways(PathwaysArgs),
    /// Compare model usage with observed usage.
    Evaluate(EvaluateArgs),
    /// Run a full experiment plan.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct WorldArg {
    /// Directory holding the world files.
    #[arg(long)]
    pub world: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 5000)]
    pub agents: usize,
    #[arg(long, default_value_t = 60)]
    pub counties: usize,
    /// Registers per identity category, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,2")]
    pub categories: Vec<usize>,
    #[arg(long, default_value_t = 0.8)]
    pub homophily: f64,
    #[arg(long, default_value_t = 10.0)]
    pub mean_degree: f64,
    #[arg(long, default_value_t = 20)]
    pub words: usize,
    #[arg(long, default_value_t = 10)]
    pub seeds_per_word: usize,
    /// Also write usage logs drawn from the full model.
    #[arg(long)]
    pub with_usage: bool,
    /// Stickiness of every word when drawing usage logs; high enough that
    /// words spread past their seeds.
    #[arg(long, default_value_t = 0.9)]
    pub usage_stickiness: f64,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 0.75)]
    pub q: f64,
    #[arg(long, default_value_t = 0.4)]
    pub r: f64,
    #[arg(long, default_value_t = 100)]
    pub theta: u32,
    #[arg(long, default_value_t = 100)]
    pub min_iterations: u32,
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: u32,
}

impl ModelArgs {
    fn config(&self, mode: Mode, stickiness: f64, seed: u64) -> SimulationConfig {
        SimulationConfig {
            mode,
            q: self.q,
            r: self.r,
            theta: self.theta,
            stickiness,
            seed,
            min_iterations: self.min_iterations,
            max_iterations: self.max_iterations,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub world: PathBuf,
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value = "network_identity")]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.5)]
    pub stickiness: f64,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub world: PathBuf,
    #[arg(long, default_value_t = 10.0)]
    pub multiplier: f64,
    #[arg(long, default_value_t = 3)]
    pub trials_per_cell: usize,
    #[arg(long, default_value_t = 0.2)]
    pub sample_fraction: f64,
    /// Only tune the global parameters.
    #[arg(long)]
    pub skip_stickiness: bool,
    #[arg(long, default_value_t = 100)]
    pub min_iterations: u32,
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: u32,
}

#[derive(Debug, Args)]
pub struct PathwaysArgs {
    #[arg(long)]
    pub world: PathBuf,
    /// Usage file; defaults to the world's own `usage.tsv`.
    #[arg(long)]
    pub usage: Option<PathBuf>,
    /// Timestamp units per block.
    #[arg(long, default_value_t = 10.0)]
    pub block_length: f64,
    #[arg(long, default_value_t = 10)]
    pub min_edges: u32,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub world: PathBuf,
    /// Model usage to score against the world's observed usage.
    #[arg(long)]
    pub model_usage: PathBuf,
    /// Network-only usage; with `--identity-only`, enables the regression.
    #[arg(long)]
    pub network_only: Option<PathBuf>,
    #[arg(long)]
    pub identity_only: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub components: usize,
    #[arg(long, default_value_t = 25)]
    pub neighbors: usize,
    #[arg(long, default_value_t = 10.0)]
    pub block_length: f64,
    #[arg(long, default_value_t = 10)]
    pub min_edges: u32,
    #[arg(long, default_value_t = 1000)]
    pub bootstrap: usize,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub world: PathBuf,
    /// Plan file (JSON or TOML). `--seed` overrides its seed when given.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Words to run when the plan lists none; default all.
    #[arg(long, value_delimiter = ',')]
    pub words: Vec<String>,
    #[arg(long)]
    pub trials: Option<usize>,
}

/// Parses `args`, applies `--config`, runs, and returns the exit code.
pub fn main_with(args: Vec<OsString>) -> i32 {
    let cli = match parse(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            log::warn!("thread pool already initialised: {e}");
        }
    }
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_)
        | Error::InvalidInput(_)
        | Error::UnknownAgent(_)
        | Error::DimensionMismatch { .. } => 1,
        _ => 2,
    }
}

fn parse(args: Vec<OsString>) -> Result<Cli> {
    let first = Cli::command().try_get_matches_from(&args).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            Error::invalid("bad command line")
        } else {
            std::process::exit(0)
        }
    })?;
    let Some(path) = first.get_one::<PathBuf>("config").cloned() else {
        return Cli::from_arg_matches(&first).map_err(|e| Error::invalid(e.to_string()));
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    let (sub, sub_matches) = first.subcommand().expect("subcommand required");

    let explicit = |m: &clap::ArgMatches, id: &str| {
        m.try_get_raw(id).ok().flatten().is_some()
            && m.value_source(id) == Some(ValueSource::CommandLine)
    };
    let mut extra: Vec<OsString> = Vec::new();
    let mut push = |key: &str, value: &toml::Value, given: bool| -> Result<()> {
        if given {
            return Ok(());
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => extra.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => extra.extend([flag.into(), s.into()]),
            toml::Value::Integer(i) => extra.extend([flag.into(), i.to_string().into()]),
            toml::Value::Float(f) => extra.extend([flag.into(), f.to_string().into()]),
            toml::Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|v| match v {
                        toml::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                extra.extend([flag.into(), parts.join(",").into()]);
            }
            _ => {
                return Err(Error::invalid(format!(
                    "{}: unsupported value for {key}",
                    path.display()
                )))
            }
        }
        Ok(())
    };
    for (key, value) in &table {
        match value {
            toml::Value::Table(t) if key == sub => {
                for (k, v) in t {
                    push(k, v, explicit(sub_matches, k))?;
                }
            }
            toml::Value::Table(_) => {}
            v => push(key, v, explicit(&first, key) || explicit(sub_matches, key))?,
        }
    }
    let mut full = args;
    full.extend(extra);
    Cli::try_parse_from(full).map_err(|e| Error::invalid(e.to_string()))
}

fn execute(cli: &Cli) -> Result<()> {
    let out = &cli.out_dir;
    match &cli.command {
        Command::Generate(a) => {
            let schema = CategorySchema::with_sizes(&a.categories)?;
            let mut spec = GeneratorSpec::new(
                a.agents,
                a.counties,
                schema,
                a.homophily,
                a.mean_degree,
                cli.seed,
            );
            spec.n_words = a.words;
            spec.seeds_per_word = a.seeds_per_word;
            let mut world = generate_world(&spec)?;
            if a.with_usage {
                let words: Vec<String> = world.words.iter().map(|w| w.word.clone()).collect();
                let config = SimulationConfig::default();
                world.usage = Some(crate::io::synthesize_usage(
                    &world,
                    &config,
                    &words,
                    |_| a.usage_stickiness,
                    cli.seed,
                )?);
            }
            write_world(&world, out)?;
            println!(
                "wrote {} agents, {} edges, {} words to {}",
                world.ids.len(),
                world.graph.edge_count(),
                world.words.len(),
                out.display()
            );
        }
        Command::Validate(a) => {
            let w = load_world(&WorldPaths::in_dir(&a.world))?;
            println!(
                "ok: {} agents, {} edges, {} counties, {} words, {} usage records",
                w.ids.len(),
                w.graph.edge_count(),
                w.counties.county_count(),
                w.words.len(),
                w.usage.as_ref().map_or(0, Vec::len)
            );
        }
        Command::Simulate(a) => {
            let world = load_world(&WorldPaths::in_dir(&a.world))?;
            let seeds = &world
                .word(&a.word)
                .ok_or_else(|| Error::invalid(format!("unknown word {}", a.word)))?
                .adopters;
            let config = a.model.config(a.mode, a.stickiness, cli.seed);
            let networks = Networks::new(
                world.graph.clone(),
                rng::derive(cli.seed, &[rng::label("shuffle")]),
            );
            let log = run(
                &config,
                &networks,
                &world.population,
                Some(&world.counties),
                seeds,
            )?;
            let path = out.join(format!("{}_{}.json", a.word, a.mode.as_str()));
            write_json(
                &path,
                &Stamped {
                    digest: digest(&config)?,
                    seed: cli.seed,
                    data: &log,
                },
            )?;
            let usage: Vec<UsageRecord> = log
                .usage_events()
                .into_iter()
                .map(|(agent, t)| UsageRecord {
                    word: a.word.clone(),
                    agent,
                    timestamp: t,
                })
                .collect();
            write_usage(
                &out.join(format!("{}_{}.usage.tsv", a.word, a.mode.as_str())),
                &usage,
                &world.ids,
            )?;
            println!(
                "{} uses over {} iterations ({:?}); log at {}",
                log.total_uses,
                log.final_iteration(),
                log.termination,
                path.display()
            );
        }
        Command::Tune(a) => tune(cli, a)?,
        Command::Pathways(a) => {
            let world = load_world(&WorldPaths::in_dir(&a.world))?;
            let usage = usage_from(&world, a.usage.as_deref())?;
            let settings = EvaluationSettings {
                empirical_block_length: a.block_length,
                min_edges: a.min_edges,
                ..Default::default()
            };
            let eval = Evaluator::new(&world, settings)?;
            let m = pathways_of(&eval, &usage)?;
            let stamp = digest(&(a.block_length, a.min_edges, cli.seed))?;
            write_pathways_tsv(&out.join("pathways.tsv"), &m, &stamp, cli.seed)?;
            println!(
                "{} pathways written to {}",
                m.len(),
                out.join("pathways.tsv").display()
            );
        }
        Command::Evaluate(a) => evaluate(cli, a)?,
        Command::Experiment(a) => {
            let world = load_world(&WorldPaths::in_dir(&a.world))?;
            let mut plan: ExperimentPlan = match &a.plan {
                Some(p) => read_plan(p)?,
                None => ExperimentPlan::default(),
            };
            if a.plan.is_none() || cli.seed != 0 {
                plan.seed = cli.seed;
            }
            if plan.words.is_empty() {
                plan.words = if a.words.is_empty() {
                    world.words.iter().map(|w| w.word.clone()).collect()
                } else {
                    a.words.clone()
                };
            }
            if let Some(t) = a.trials {
                plan.trials = t;
            }
            let s = run_experiment(&plan, &world, out)?;
            for m in &s.modes {
                println!(
                    "{:<17} uses {:>10.1}  lees_l {}  likelihood {}",
                    m.mode.as_str(),
                    m.mean_uses,
                    m.mean_lees_l.map_or("NA".into(), |v| format!("{v:.4}")),
                    m.likelihood.map_or("NA".into(), |v| format!("{v:.6}"))
                );
            }
            let failed: usize = s.modes.iter().map(|m| m.failed).sum();
            if failed > 0 {
                return Err(Error::Internal(format!(
                    "{failed} job(s) failed; see summary.json"
                )));
            }
        }
    }
    Ok(())
}

fn read_plan(path: &Path) -> Result<ExperimentPlan> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
    } else {
        Ok(serde_json::from_str(&text)?)
    }
}

fn usage_from(world: &WorldBundle, path: Option<&Path>) -> Result<Vec<UsageRecord>> {
    match path {
        Some(p) => read_usage(p, &world.ids),
        None => world
            .usage
            .clone()
            .ok_or_else(|| Error::invalid("the world has no usage.tsv; pass --usage")),
    }
}

fn by_word(usage: &[UsageRecord]) -> BTreeMap<&str, Vec<&UsageRecord>> {
    let mut m: BTreeMap<&str, Vec<&UsageRecord>> = BTreeMap::new();
    for u in usage {
        m.entry(u.word.as_str()).or_default().push(u);
    }
    m
}

fn pathways_of(eval: &Evaluator<'_>, usage: &[UsageRecord]) -> Result<PathwayMatrix> {
    let series = by_word(usage)
        .into_iter()
        .map(|(w, rs)| (w.to_string(), eval.usage_counts(&rs).1))
        .collect();
    eval.pathways(series)
}

fn tune(cli: &Cli, a: &TuneArgs) -> Result<()> {
    let world = load_world(&WorldPaths::in_dir(&a.world))?;
    let usage = usage_from(&world, None)?;
    let counts = by_word(&usage);
    let targets: Vec<CalibrationTarget> = world
        .words
        .iter()
        .map(|w| {
            let mut t = CalibrationTarget::new(
                w.word.clone(),
                w.adopters.clone(),
                counts.get(w.word.as_str()).map_or(0, Vec::len) as u64,
            );
            t.multiplier = a.multiplier;
            t
        })
        .collect();
    let networks = Networks::from_parts(world.graph.clone(), world.graph.clone());
    let base = SimulationConfig {
        min_iterations: a.min_iterations,
        max_iterations: a.max_iterations,
        ..Default::default()
    };
    let sample: Vec<CalibrationTarget> = sample_words(targets.len(), a.sample_fraction, cli.seed)
        .into_iter()
        .map(|i| targets[i].clone())
        .collect();
    let global = tune_global(
        &sample,
        &GlobalGrid::default(),
        &base,
        a.trials_per_cell,
        cli.seed,
        &networks,
        &world.population,
    )?;
    println!(
        "global: Q = {}, r = {}, theta = {} (mse {:.3})",
        global.best.q, global.best.r, global.best.theta, global.best.mse
    );
    let tuned = SimulationConfig {
        q: global.best.q,
        r: global.best.r,
        theta: global.best.theta,
        ..base
    };
    let mut stickiness = Vec::new();
    if !a.skip_stickiness {
        for t in &targets {
            let fit = tune_stickiness(
                t,
                &tuned,
                &default_stickiness_grid(),
                a.trials_per_cell,
                cli.seed,
                &networks,
                &world.population,
            )?;
            println!("{}: S_w = {:.2}", t.word, fit.stickiness);
            stickiness.push(fit);
        }
    }
    #[derive(Serialize)]
    struct Report<'a> {
        global: &'a crate::calibration::GlobalFit,
        stickiness: &'a [crate::calibration::StickinessFit],
    }
    let report = Report {
        global: &global,
        stickiness: &stickiness,
    };
    write_json(
        &cli.out_dir.join("calibration.json"),
        &Stamped {
            digest: digest(&report)?,
            seed: cli.seed,
            data: &report,
        },
    )
}

fn evaluate(cli: &Cli, a: &EvaluateArgs) -> Result<()> {
    let world = load_world(&WorldPaths::in_dir(&a.world))?;
    let observed = usage_from(&world, None)?;
    let model = read_usage(&a.model_usage, &world.ids)?;
    let settings = EvaluationSettings {
        neighbors: a.neighbors,
        empirical_block_length: a.block_length,
        min_edges: a.min_edges,
        ..Default::default()
    };
    let eval = Evaluator::new(&world, settings)?;
    let (obs_words, model_words) = (by_word(&observed), by_word(&model));

    #[derive(Serialize)]
    struct WordScore {
        word: String,
        lees_l: Option<f64>,
        similarity: Option<crate::geostats::Similarity>,
    }
    let mut scores = Vec::new();
    let mut observed_maps = Vec::new();
    for (w, rs) in &obs_words {
        let emp = eval.smoothed(&eval.usage_counts(rs).0, w, "empirical")?;
        observed_maps.push(emp.values.clone());
        if let Some(ms) = model_words.get(w) {
            let m = eval.smoothed(&eval.usage_counts(ms).0, w, "model")?;
            let l = eval.lees_l(&m, &emp);
            scores.push(WordScore {
                word: w.to_string(),
                lees_l: l,
                similarity: l.map(crate::geostats::classify_similarity),
            });
        }
    }
    let e_path = pathways_of(&eval, &observed)?;
    let m_path = pathways_of(&eval, &model)?;
    let likelihood = pathway_likelihood(&e_path, &m_path).ok();
    let regression = match (&a.network_only, &a.identity_only) {
        (Some(n), Some(i)) => {
            let n = pathways_of(&eval, &read_usage(n, &world.ids)?)?;
            let i = pathways_of(&eval, &read_usage(i, &world.ids)?)?;
            let boot = (a.bootstrap > 0).then_some((a.bootstrap, cli.seed));
            Some(pathway_regression(&e_path, &n, &i, boot).map_err(|e| e.to_string()))
        }
        _ => None,
    };
    let regions = principal_regions(&observed_maps, a.components).map_err(|e| e.to_string());

    #[derive(Serialize)]
    struct Evaluation {
        words: Vec<WordScore>,
        likelihood: Option<f64>,
        regression: Option<std::result::Result<crate::geostats::RegressionTable, String>>,
        principal_regions: std::result::Result<crate::geostats::PrincipalRegions, String>,
    }
    let result = Evaluation {
        words: scores,
        likelihood,
        regression,
        principal_regions: regions,
    };
    for s in &result.words {
        println!(
            "{:<16} {}",
            s.word,
            s.lees_l.map_or("NA".into(), |l| format!("{l:.4}"))
        );
    }
    println!(
        "pathway likelihood: {}",
        likelihood.map_or("NA".into(), |l| format!("{l:.6}"))
    );
    write_json(
        &cli.out_dir.join("evaluation.json"),
        &Stamped {
            digest: digest(&(a.neighbors, a.block_length, a.min_edges))?,
            seed: cli.seed,
            data: &result,
        },
    )
}
