use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::{
    default_stickiness_grid, sample_words, tune_global, tune_stickiness, CalibrationTarget,
    GlobalFit, GlobalGrid, StickinessFit, DEFAULT_MULTIPLIER, DEFAULT_SAMPLE_FRACTION,
    DEFAULT_TRIALS_PER_CELL,
};
use crate::engine::{run, Mode, Networks, SimulationConfig, Termination};
use crate::error::{Error, Result};
use crate::geostats::{
    aggregate, build_pathways, classify_county, classify_similarity, county_edge_counts,
    getis_ord_smooth, lees_l, pathway_likelihood, pathway_likelihood_where, pathway_regression,
    percentile, PairClass, PathwayMatrix, RegressionTable, Similarity, SpatialDistribution,
    SpatialTimeSeries, SpatialWeights, Urbanicity,
};
use crate::network::AgentId;
use crate::rng;

use super::output::{digest, write_distribution_tsv, write_json, write_pathways_tsv, Stamped};
use super::world::{UsageRecord, WorldBundle};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CalibrationSettings {
    /// Tune `(Q, r, θ)` on a seeded word sample before running.
    pub tune_global: bool,
    /// Tune each word's stickiness against its observed use count.
    pub tune_stickiness: bool,
    pub multiplier: f64,
    pub sample_fraction: f64,
    pub trials_per_cell: usize,
    pub grid: GlobalGrid,
    pub stickiness_grid: Vec<f64>,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        CalibrationSettings {
            tune_global: false,
            tune_stickiness: false,
            multiplier: DEFAULT_MULTIPLIER,
            sample_fraction: DEFAULT_SAMPLE_FRACTION,
            trials_per_cell: DEFAULT_TRIALS_PER_CELL,
            grid: GlobalGrid::default(),
            stickiness_grid: default_stickiness_grid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluationSettings {
    /// Neighbourhood size of the spatial weights, self included.
    pub neighbors: usize,
    /// Engine iterations per simulated time block.
    pub block_length: u32,
    /// Timestamp units per observed time block.
    pub empirical_block_length: f64,
    pub min_edges: u32,
    pub lag: usize,
    /// Resamples for the confidence intervals over trials.
    pub bootstrap_resamples: usize,
    /// Resamples for regression intervals; 0 skips them.
    pub regression_bootstrap: usize,
}

impl Default for EvaluationSettings {
    fn default() -> Self {
        EvaluationSettings {
            neighbors: 25,
            block_length: 10,
            empirical_block_length: 10.0,
            min_edges: 10,
            lag: 1,
            bootstrap_resamples: 1000,
            regression_bootstrap: 1000,
        }
    }
}

/// Words × modes × trials to run, with the settings for calibration and
/// evaluation. Every random stream is derived from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentPlan {
    pub words: Vec<String>,
    pub modes: Vec<Mode>,
    pub trials: usize,
    pub seed: u64,
    /// Global parameters and stopping rule; `stickiness` is the default
    /// for words missing from [`ExperimentPlan::stickiness`].
    pub simulation: SimulationConfig,
    pub stickiness: BTreeMap<String, f64>,
    pub calibration: CalibrationSettings,
    pub evaluation: EvaluationSettings,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            words: Vec::new(),
            modes: Mode::ALL.to_vec(),
            trials: 5,
            seed: 0,
            simulation: SimulationConfig::default(),
            stickiness: BTreeMap::new(),
            calibration: CalibrationSettings::default(),
            evaluation: EvaluationSettings::default(),
        }
    }
}

impl ExperimentPlan {
    pub fn validate(&self, world: &WorldBundle) -> Result<()> {
        if self.words.is_empty() {
            return Err(Error::invalid("plan has no words"));
        }
        if let Some(w) = self.words.iter().find(|w| world.word(w).is_none()) {
            return Err(Error::invalid(format!(
                "plan word {w} has no seeds in the world"
            )));
        }
        let mut words = self.words.clone();
        words.sort();
        words.dedup();
        if words.len() != self.words.len() {
            return Err(Error::invalid("plan lists a word twice"));
        }
        if self.modes.is_empty() {
            return Err(Error::invalid("plan has no modes"));
        }
        if (1..self.modes.len()).any(|i| self.modes[..i].contains(&self.modes[i])) {
            return Err(Error::invalid("plan lists a mode twice"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if let Some((w, s)) = self
            .stickiness
            .iter()
            .find(|(_, s)| !(0.0..=1.0).contains(*s))
        {
            return Err(Error::invalid(format!(
                "stickiness {s} of {w} outside [0,1]"
            )));
        }
        self.simulation.validate()
    }

    /// Engine seed of `(word, trial)`. Modes share it so that counterfactual
    /// runs see the same random numbers.
    pub fn run_seed(&self, word: &str, trial: usize) -> u64 {
        rng::derive(self.seed, &[rng::label(word), trial as u64])
    }

    fn stickiness_of(&self, word: &str) -> f64 {
        self.stickiness
            .get(word)
            .copied()
            .unwrap_or(self.simulation.stickiness)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobResult {
    pub word: String,
    pub mode: Mode,
    pub trial: usize,
    pub seed: u64,
    pub total_uses: u64,
    pub iterations: u32,
    pub termination: Option<Termination>,
    pub lees_l: Option<f64>,
    pub similarity: Option<Similarity>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: Mode,
    pub jobs: usize,
    pub failed: usize,
    pub mean_uses: f64,
    pub mean_lees_l: Option<f64>,
    /// 95% percentile bootstrap interval of the mean over jobs.
    pub lees_l_ci: Option<(f64, f64)>,
    pub very_similar_share: Option<f64>,
    pub broadly_similar_share: Option<f64>,
    pub pathways: usize,
    pub likelihood: Option<f64>,
    pub likelihood_by_class: BTreeMap<PairClass, Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationOutcome {
    pub global: Option<GlobalFit>,
    pub stickiness: Vec<StickinessFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub digest: String,
    pub seed: u64,
    pub simulation: SimulationConfig,
    pub calibration: Option<CalibrationOutcome>,
    pub modes: Vec<ModeSummary>,
    pub regressions: BTreeMap<String, std::result::Result<RegressionTable, String>>,
    pub jobs: Vec<JobResult>,
}

impl ExperimentSummary {
    pub fn mode(&self, mode: Mode) -> Option<&ModeSummary> {
        self.modes.iter().find(|m| m.mode == mode)
    }
}

/// Fixed spatial context for evaluating runs against one world.
pub struct Evaluator<'a> {
    world: &'a WorldBundle,
    weights: SpatialWeights,
    edge_counts: Vec<Vec<u32>>,
    urbanicity: Vec<Urbanicity>,
    settings: EvaluationSettings,
}

impl<'a> Evaluator<'a> {
    pub fn new(world: &'a WorldBundle, settings: EvaluationSettings) -> Result<Self> {
        let sizes = world.counties.agents_per_county();
        let centroids: Vec<(f64, f64)> = world
            .counties
            .counties()
            .iter()
            .zip(sizes)
            .filter(|(_, &s)| s > 0)
            .map(|(c, _)| (c.lat, c.lon))
            .collect();
        Ok(Evaluator {
            world,
            weights: SpatialWeights::knn(&centroids, settings.neighbors)?,
            edge_counts: county_edge_counts(&world.graph, &world.counties),
            urbanicity: world
                .counties
                .counties()
                .iter()
                .map(|c| classify_county(c.urbanized_population))
                .collect(),
            settings,
        })
    }

    /// Per-capita, G*-smoothed map of uses per county.
    pub fn smoothed(
        &self,
        county_uses: &[u64],
        word: &str,
        source: &str,
    ) -> Result<SpatialDistribution> {
        let codes = self.world.counties.counties();
        let agg = aggregate(
            codes
                .iter()
                .map(|c| c.code.as_str())
                .zip(county_uses.iter().copied()),
            &self.world.counties,
            true,
        );
        let mut dist = getis_ord_smooth(&agg.distribution, &self.weights)?.distribution;
        dist.word = word.to_string();
        dist.source = source.to_string();
        Ok(dist)
    }

    pub fn lees_l(&self, a: &SpatialDistribution, b: &SpatialDistribution) -> Option<f64> {
        lees_l(&a.values, &b.values, &self.weights)
    }

    /// County totals and time blocks of observed uses of `word`; blocks
    /// start at the word's first timestamp.
    pub fn usage_counts(&self, usage: &[&UsageRecord]) -> (Vec<u64>, Vec<Vec<u64>>) {
        let k = self.world.counties.county_count();
        let mut totals = vec![0u64; k];
        let t0 = usage
            .iter()
            .map(|u| u.timestamp)
            .fold(f64::INFINITY, f64::min);
        let len = self.settings.empirical_block_length.max(f64::MIN_POSITIVE);
        let mut blocks: Vec<Vec<u64>> = Vec::new();
        for u in usage {
            let c = self.world.counties.county_of(u.agent);
            totals[c] += 1;
            let b = ((u.timestamp - t0) / len).floor() as usize;
            if blocks.len() <= b {
                blocks.resize(b + 1, vec![0; k]);
            }
            blocks[b][c] += 1;
        }
        (totals, blocks)
    }

    pub fn pathways(&self, series: Vec<(String, Vec<Vec<u64>>)>) -> Result<PathwayMatrix> {
        let codes: Vec<String> = self
            .world
            .counties
            .counties()
            .iter()
            .map(|c| c.code.clone())
            .collect();
        let s = SpatialTimeSeries::from_counts(
            codes,
            self.world.counties.agents_per_county(),
            self.settings.block_length,
            series,
        )?;
        build_pathways(
            &s,
            &self.edge_counts,
            self.settings.min_edges,
            &self.urbanicity,
            self.settings.lag,
        )
    }
}

/// Observed-usage records drawn from the full model: one record per use,
/// timestamped by iteration. `stickiness` gives each word's value.
pub fn synthesize_usage(
    world: &WorldBundle,
    config: &SimulationConfig,
    words: &[String],
    stickiness: impl Fn(&str) -> f64 + Sync,
    seed: u64,
) -> Result<Vec<UsageRecord>> {
    let networks = Networks::from_parts(world.graph.clone(), world.graph.clone());
    let per_word: Vec<Vec<UsageRecord>> = words
        .par_iter()
        .map(|w| {
            let seeds = &world
                .word(w)
                .ok_or_else(|| Error::invalid(format!("unknown word {w}")))?
                .adopters;
            let c = SimulationConfig {
                mode: Mode::NetworkIdentity,
                stickiness: stickiness(w),
                seed: rng::derive(seed, &[rng::label("usage"), rng::label(w)]),
                ..config.clone()
            };
            let log = run(&c, &networks, &world.population, None, seeds)?;
            Ok(log
                .usage_events()
                .into_iter()
                .map(|(agent, t)| UsageRecord {
                    word: w.clone(),
                    agent,
                    timestamp: t,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_word.into_iter().flatten().collect())
}

fn bootstrap_mean_ci(values: &[f64], resamples: usize, seed: u64) -> Option<(f64, f64)> {
    if values.is_empty() || resamples == 0 {
        return None;
    }
    let mut r = rng::sequential(seed, "trial-bootstrap");
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| {
            (0..values.len())
                .map(|_| values[r.random_range(0..values.len())])
                .sum::<f64>()
                / values.len() as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    Some((percentile(&means, 0.025), percentile(&means, 0.975)))
}

fn mean_of(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

struct JobOutput {
    result: JobResult,
    blocks: Vec<Vec<u64>>,
}

fn calibrate(
    plan: &mut ExperimentPlan,
    world: &WorldBundle,
    networks: &Networks,
    out: &Path,
    stamp: &str,
) -> Result<Option<CalibrationOutcome>> {
    let cal = plan.calibration.clone();
    if !cal.tune_global && !cal.tune_stickiness {
        return Ok(None);
    }
    if world.usage.is_none() {
        return Err(Error::invalid("calibration needs observed usage logs"));
    }
    let all_targets: Vec<CalibrationTarget> = plan
        .words
        .iter()
        .map(|w| {
            let mut t = CalibrationTarget::new(
                w.clone(),
                world.word(w).unwrap().adopters.clone(),
                world.usage_of(w).count() as u64,
            );
            t.multiplier = cal.multiplier;
            t.stickiness = plan.stickiness_of(w);
            t
        })
        .collect();
    let mut outcome = CalibrationOutcome {
        global: None,
        stickiness: Vec::new(),
    };
    let base = SimulationConfig {
        mode: Mode::NetworkIdentity,
        ..plan.simulation.clone()
    };
    if cal.tune_global {
        let sample = sample_words(
            plan.words.len(),
            cal.sample_fraction,
            rng::derive(plan.seed, &[rng::label("sample")]),
        );
        let targets: Vec<CalibrationTarget> =
            sample.iter().map(|&i| all_targets[i].clone()).collect();
        let fit = tune_global(
            &targets,
            &cal.grid,
            &base,
            cal.trials_per_cell,
            rng::derive(plan.seed, &[rng::label("tune-global")]),
            networks,
            &world.population,
        )?;
        plan.simulation.q = fit.best.q;
        plan.simulation.r = fit.best.r;
        plan.simulation.theta = fit.best.theta;
        outcome.global = Some(fit);
    }
    if cal.tune_stickiness {
        let config = SimulationConfig {
            mode: Mode::NetworkIdentity,
            ..plan.simulation.clone()
        };
        for t in &all_targets {
            let fit = tune_stickiness(
                t,
                &config,
                &cal.stickiness_grid,
                cal.trials_per_cell,
                rng::derive(plan.seed, &[rng::label("tune-stickiness")]),
                networks,
                &world.population,
            )?;
            plan.stickiness.insert(t.word.clone(), fit.stickiness);
            outcome.stickiness.push(fit);
        }
    }
    write_json(
        &out.join("calibration.json"),
        &Stamped {
            digest: stamp.to_string(),
            seed: plan.seed,
            data: &outcome,
        },
    )?;
    Ok(Some(outcome))
}

/// Smoothed map and raw block counts of one observed word.
type EmpiricalWord = (SpatialDistribution, Vec<Vec<u64>>);

/// Runs every `(word, mode, trial)` job, evaluates it against the observed
/// usage when the world has any, and writes per-job files plus summary
/// tables under `out`. A failing job is recorded and the rest continue.
///
/// Layout: `<word>/<mode>/trial_<k>.json` (adoption log) and `.tsv`
/// (smoothed map), `pathways/<source>.tsv`, `regression/<dependent>.json`,
/// `summary.json`, `summary.tsv`, `plan.json`. Results do not depend on the
/// size of the thread pool.
pub fn run_experiment(
    plan: &ExperimentPlan,
    world: &WorldBundle,
    out: &Path,
) -> Result<ExperimentSummary> {
    plan.validate(world)?;
    let stamp = digest(plan)?;
    write_json(
        &out.join("plan.json"),
        &Stamped {
            digest: stamp.clone(),
            seed: plan.seed,
            data: plan,
        },
    )?;
    let networks = Networks::new(
        world.graph.clone(),
        rng::derive(plan.seed, &[rng::label("shuffle")]),
    );
    let mut plan = plan.clone();
    let calibration = calibrate(&mut plan, world, &networks, out, &stamp)?;
    let plan = plan;
    let eval = Evaluator::new(world, plan.evaluation.clone())?;
    let k = world.counties.county_count();

    let empirical: Option<BTreeMap<String, EmpiricalWord>> = match &world.usage {
        None => None,
        Some(_) => Some(
            plan.words
                .iter()
                .map(|w| {
                    let usage: Vec<&UsageRecord> = world.usage_of(w).collect();
                    let (totals, blocks) = eval.usage_counts(&usage);
                    let dist = eval.smoothed(&totals, w, "empirical")?;
                    write_distribution_tsv(
                        &out.join(w).join("empirical.tsv"),
                        &dist,
                        &stamp,
                        plan.seed,
                    )?;
                    Ok((w.clone(), (dist, blocks)))
                })
                .collect::<Result<_>>()?,
        ),
    };

    let jobs: Vec<(usize, Mode, usize)> = (0..plan.words.len())
        .flat_map(|w| {
            plan.modes
                .iter()
                .flat_map(move |&m| (0..plan.trials).map(move |t| (w, m, t)))
        })
        .collect();
    let outputs: Vec<JobOutput> = jobs
        .par_iter()
        .map(|&(wi, mode, trial)| {
            let word = &plan.words[wi];
            let seed = plan.run_seed(word, trial);
            let mut result = JobResult {
                word: word.clone(),
                mode,
                trial,
                seed,
                total_uses: 0,
                iterations: 0,
                termination: None,
                lees_l: None,
                similarity: None,
                error: None,
            };
            let mut attempt = || -> Result<Vec<Vec<u64>>> {
                let config = SimulationConfig {
                    mode,
                    seed,
                    stickiness: plan.stickiness_of(word),
                    ..plan.simulation.clone()
                };
                let seeds: &[AgentId] = &world.word(word).expect("validated").adopters;
                let log = run(
                    &config,
                    &networks,
                    &world.population,
                    Some(&world.counties),
                    seeds,
                )?;
                let dir = out.join(word).join(mode.as_str());
                write_json(
                    &dir.join(format!("trial_{trial}.json")),
                    &Stamped {
                        digest: stamp.clone(),
                        seed,
                        data: &log,
                    },
                )?;
                let dist = eval.smoothed(&log.county_totals(k), word, mode.as_str())?;
                write_distribution_tsv(
                    &dir.join(format!("trial_{trial}.tsv")),
                    &dist,
                    &stamp,
                    seed,
                )?;
                result.total_uses = log.total_uses;
                result.iterations = log.final_iteration();
                result.termination = Some(log.termination);
                if let Some(emp) = &empirical {
                    result.lees_l = eval.lees_l(&dist, &emp[word].0);
                    result.similarity = result.lees_l.map(classify_similarity);
                }
                Ok(log.county_blocks(k, plan.evaluation.block_length))
            };
            match attempt() {
                Ok(blocks) => JobOutput { result, blocks },
                Err(e) => {
                    log::error!("job {word}/{}/{trial} failed: {e}", mode.as_str());
                    result.error = Some(e.to_string());
                    JobOutput {
                        result,
                        blocks: Vec::new(),
                    }
                }
            }
        })
        .collect();

    let empirical_pathways = match &empirical {
        Some(emp) => {
            let series = emp
                .iter()
                .map(|(w, (_, b))| (w.clone(), b.clone()))
                .collect();
            match eval.pathways(series) {
                Ok(m) => {
                    write_pathways_tsv(
                        &out.join("pathways").join("empirical.tsv"),
                        &m,
                        &stamp,
                        plan.seed,
                    )?;
                    Some(m)
                }
                Err(e) => {
                    log::warn!("no empirical pathways: {e}");
                    None
                }
            }
        }
        None => None,
    };

    let mut mode_pathways: BTreeMap<Mode, PathwayMatrix> = BTreeMap::new();
    let mut summaries = Vec::new();
    for &mode in &plan.modes {
        let mine: Vec<&JobOutput> = outputs.iter().filter(|o| o.result.mode == mode).collect();
        let ok: Vec<&JobOutput> = mine
            .iter()
            .copied()
            .filter(|o| o.result.error.is_none())
            .collect();
        let series: Vec<(String, Vec<Vec<u64>>)> = ok
            .iter()
            .map(|o| {
                (
                    format!("{}#{}", o.result.word, o.result.trial),
                    o.blocks.clone(),
                )
            })
            .collect();
        let pathways = if series.is_empty() {
            None
        } else {
            eval.pathways(series).ok()
        };
        if let Some(m) = &pathways {
            write_pathways_tsv(
                &out.join("pathways").join(format!("{}.tsv", mode.as_str())),
                m,
                &stamp,
                plan.seed,
            )?;
        }
        let lees: Vec<f64> = ok.iter().filter_map(|o| o.result.lees_l).collect();
        let share = |s: Similarity| -> Option<f64> {
            (!lees.is_empty()).then(|| {
                let hits = lees
                    .iter()
                    .filter(|&&l| match s {
                        Similarity::VerySimilar => {
                            classify_similarity(l) == Similarity::VerySimilar
                        }
                        _ => classify_similarity(l) != Similarity::NotSimilar,
                    })
                    .count();
                hits as f64 / lees.len() as f64
            })
        };
        let (likelihood, by_class) = match (&empirical_pathways, &pathways) {
            (Some(e), Some(m)) => (
                pathway_likelihood(e, m).ok(),
                PairClass::ALL
                    .iter()
                    .map(|&c| (c, pathway_likelihood_where(e, m, |x| x == c).ok()))
                    .collect(),
            ),
            _ => (None, PairClass::ALL.iter().map(|&c| (c, None)).collect()),
        };
        let uses: Vec<f64> = ok.iter().map(|o| o.result.total_uses as f64).collect();
        summaries.push(ModeSummary {
            mode,
            jobs: mine.len(),
            failed: mine.len() - ok.len(),
            mean_uses: mean_of(&uses).unwrap_or(0.0),
            mean_lees_l: mean_of(&lees),
            lees_l_ci: bootstrap_mean_ci(
                &lees,
                plan.evaluation.bootstrap_resamples,
                rng::derive(plan.seed, &[rng::label("bootstrap"), mode.index()]),
            ),
            very_similar_share: share(Similarity::VerySimilar),
            broadly_similar_share: share(Similarity::BroadlySimilar),
            pathways: pathways.as_ref().map_or(0, |m| m.len()),
            likelihood,
            likelihood_by_class: by_class,
        });
        if let Some(m) = pathways {
            mode_pathways.insert(mode, m);
        }
    }

    let mut regressions = BTreeMap::new();
    if let (Some(n), Some(i)) = (
        mode_pathways.get(&Mode::NetworkOnly),
        mode_pathways.get(&Mode::IdentityOnly),
    ) {
        let boot = (plan.evaluation.regression_bootstrap > 0).then(|| {
            (
                plan.evaluation.regression_bootstrap,
                rng::derive(plan.seed, &[rng::label("regression")]),
            )
        });
        let mut deps: Vec<(String, &PathwayMatrix)> = Vec::new();
        if let Some(e) = &empirical_pathways {
            deps.push(("empirical".into(), e));
        }
        if let Some(ni) = mode_pathways.get(&Mode::NetworkIdentity) {
            deps.push((Mode::NetworkIdentity.as_str().into(), ni));
        }
        for (name, dep) in deps {
            let table = pathway_regression(dep, n, i, boot).map_err(|e| e.to_string());
            write_json(
                &out.join("regression").join(format!("{name}.json")),
                &Stamped {
                    digest: stamp.clone(),
                    seed: plan.seed,
                    data: &table,
                },
            )?;
            regressions.insert(name, table);
        }
    }

    let summary = ExperimentSummary {
        digest: stamp.clone(),
        seed: plan.seed,
        simulation: plan.simulation.clone(),
        calibration,
        modes: summaries,
        regressions,
        jobs: outputs.into_iter().map(|o| o.result).collect(),
    };
    write_json(&out.join("summary.json"), &summary)?;
    std::fs::write(out.join("summary.tsv"), summary_tsv(&summary))
        .map_err(|e| Error::io(out.join("summary.tsv"), e))?;
    Ok(summary)
}

fn summary_tsv(s: &ExperimentSummary) -> String {
    let f = |x: Option<f64>| x.map_or("NA".to_string(), |v| v.to_string());
    let mut t = format!("# digest={} seed={}\n", s.digest, s.seed);
    t.push_str(
        "mode\tjobs\tfailed\tmean_uses\tmean_lees_l\tlees_l_lo\tlees_l_hi\tvery_similar\tbroadly_similar\tpathways\tlikelihood\tlikelihood_urban_urban\tlikelihood_urban_rural\tlikelihood_rural_rural\n",
    );
    for m in &s.modes {
        let by = |c: PairClass| f(m.likelihood_by_class.get(&c).copied().flatten());
        writeln!(
            t,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            m.mode.as_str(),
            m.jobs,
            m.failed,
            m.mean_uses,
            f(m.mean_lees_l),
            f(m.lees_l_ci.map(|c| c.0)),
            f(m.lees_l_ci.map(|c| c.1)),
            f(m.very_similar_share),
            f(m.broadly_similar_share),
            m.pathways,
            f(m.likelihood),
            by(PairClass::UrbanUrban),
            by(PairClass::UrbanRural),
            by(PairClass::RuralRural),
        )
        .unwrap();
    }
    t
}
