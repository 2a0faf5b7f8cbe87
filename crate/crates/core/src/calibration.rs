//! Grid-search tuning of `(Q, r, θ)` over a word sample and of per-word
//! stickiness, matching simulated use counts to scaled empirical counts.
//!
//! Every grid cell reuses the same per-(word, trial) run seeds, so cells are
//! compared under common random numbers and the surface is a deterministic
//! function of the calibration seed.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{Networks, PreparedWord, Simulation, SimulationConfig};
use crate::error::{Error, Result};
use crate::identity::Population;
use crate::network::AgentId;
use crate::rng;

pub const DEFAULT_MULTIPLIER: f64 = 10.0;
pub const DEFAULT_TRIALS_PER_CELL: usize = 3;
pub const DEFAULT_SAMPLE_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub word: String,
    /// Ordered initial adopters.
    pub seeds: Vec<AgentId>,
    pub empirical_use_count: u64,
    pub multiplier: f64,
    /// Stickiness held fixed while the global parameters are tuned.
    pub stickiness: f64,
}

impl CalibrationTarget {
    pub fn new(word: impl Into<String>, seeds: Vec<AgentId>, empirical_use_count: u64) -> Self {
        CalibrationTarget {
            word: word.into(),
            seeds,
            empirical_use_count,
            multiplier: DEFAULT_MULTIPLIER,
            stickiness: 1.0,
        }
    }

    /// `multiplier · empirical_use_count`.
    pub fn goal(&self) -> f64 {
        self.multiplier * self.empirical_use_count as f64
    }

    fn validate(&self) -> Result<()> {
        if !(self.multiplier > 0.0 && self.multiplier.is_finite()) {
            return Err(Error::invalid(format!(
                "word {}: multiplier must be positive",
                self.word
            )));
        }
        if self.seeds.is_empty() {
            return Err(Error::invalid(format!(
                "word {}: no seed adopters",
                self.word
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalGrid {
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<u32>,
}

impl Default for GlobalGrid {
    fn default() -> Self {
        GlobalGrid {
            q: vec![0.70, 0.75, 0.80, 0.85, 0.90, 0.95],
            r: (2..=9).map(|k| k as f64 / 10.0).collect(),
            theta: vec![50, 100, 150, 200],
        }
    }
}

impl GlobalGrid {
    pub fn cells(&self) -> Vec<(f64, f64, u32)> {
        let mut out = Vec::with_capacity(self.q.len() * self.r.len() * self.theta.len());
        for &q in &self.q {
            for &r in &self.r {
                for &t in &self.theta {
                    out.push((q, r, t));
                }
            }
        }
        out
    }
}

/// `{0.10, 0.11, …, 1.00}`.
pub fn default_stickiness_grid() -> Vec<f64> {
    (10..=100).map(|k| k as f64 / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellScore {
    pub q: f64,
    pub r: f64,
    pub theta: u32,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalFit {
    pub best: CellScore,
    pub words: Vec<String>,
    pub trials_per_cell: usize,
    pub seed: u64,
    /// Every evaluated cell, in grid order.
    pub surface: Vec<CellScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StickinessFit {
    pub word: String,
    pub stickiness: f64,
    pub error: f64,
    /// `(S_w, |mean simulated − goal|)` in grid order.
    pub surface: Vec<(f64, f64)>,
}

/// Seeded uniform sample of `ceil(fraction · n)` indices without replacement,
/// returned in ascending order.
pub fn sample_words(n: usize, fraction: f64, seed: u64) -> Vec<usize> {
    let k = ((n as f64 * fraction).ceil() as usize).clamp(usize::from(n > 0), n);
    let mut picked = index::sample(&mut rng::sequential(seed, "word-sample"), n, k).into_vec();
    picked.sort_unstable();
    picked
}

fn trial_seed(seed: u64, word: usize, trial: usize) -> u64 {
    rng::derive(seed, &[word as u64, trial as u64])
}

fn mean_uses(
    networks: &Networks,
    prepared: &PreparedWord,
    config: &SimulationConfig,
    seeds: &[AgentId],
    word: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let graph = networks.for_mode(config.mode);
    let mut total = 0u64;
    for t in 0..trials {
        let mut c = config.clone();
        c.seed = trial_seed(seed, word, t);
        let mut sim = Simulation::with_prepared(graph, prepared.clone(), c, seeds.to_vec());
        sim.run_with(|_, _| {})?;
        total += sim.state().total_uses;
    }
    Ok(total as f64 / trials as f64)
}

fn dedup(seeds: &[AgentId]) -> Vec<AgentId> {
    let mut seen = std::collections::HashSet::new();
    seeds.iter().copied().filter(|s| seen.insert(*s)).collect()
}

fn prepare(
    networks: &Networks,
    population: &Population,
    base: &SimulationConfig,
    q: f64,
    seeds: &[AgentId],
) -> Result<PreparedWord> {
    let graph = networks.for_mode(base.mode);
    if let Some(&bad) = seeds.iter().find(|&&s| s as usize >= graph.node_count()) {
        return Err(Error::UnknownAgent(bad.to_string()));
    }
    PreparedWord::new(graph, population, seeds, q, base.mode.uses_identity())
}

/// Grid cell minimizing the mean over words of `(mean simulated uses − goal)²`.
/// Ties go to the lexicographically smallest `(Q, r, θ)`. `base` supplies the
/// mode and stopping rule; its `q`, `r`, `theta`, `stickiness` and `seed` are
/// overridden.
pub fn tune_global(
    targets: &[CalibrationTarget],
    grid: &GlobalGrid,
    base: &SimulationConfig,
    trials_per_cell: usize,
    seed: u64,
    networks: &Networks,
    population: &Population,
) -> Result<GlobalFit> {
    if targets.is_empty() {
        return Err(Error::invalid("empty word sample"));
    }
    if grid.q.is_empty() || grid.r.is_empty() || grid.theta.is_empty() {
        return Err(Error::invalid("every grid axis needs at least one value"));
    }
    if trials_per_cell == 0 {
        return Err(Error::invalid("trials_per_cell must be at least 1"));
    }
    for t in targets {
        t.validate()?;
    }
    for cell in grid.cells() {
        SimulationConfig {
            q: cell.0,
            r: cell.1,
            theta: cell.2,
            ..base.clone()
        }
        .validate()?;
    }
    let seeds: Vec<Vec<AgentId>> = targets.iter().map(|t| dedup(&t.seeds)).collect();

    // enregisterment depends on Q only
    let prepared: Vec<Vec<PreparedWord>> = grid
        .q
        .par_iter()
        .map(|&q| {
            seeds
                .iter()
                .map(|s| prepare(networks, population, base, q, s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, f64, u32, usize)> = (0..grid.q.len())
        .flat_map(|qi| {
            grid.r
                .iter()
                .flat_map(move |&r| grid.theta.iter().map(move |&t| (qi, r, t)))
                .flat_map(move |(qi, r, t)| (0..targets.len()).map(move |w| (qi, r, t, w)))
        })
        .collect();
    let errors: Vec<f64> = jobs
        .par_iter()
        .map(|&(qi, r, theta, w)| {
            let config = SimulationConfig {
                q: grid.q[qi],
                r,
                theta,
                stickiness: targets[w].stickiness,
                ..base.clone()
            };
            let sim = mean_uses(
                networks,
                &prepared[qi][w],
                &config,
                &seeds[w],
                w,
                trials_per_cell,
                seed,
            )?;
            Ok((sim - targets[w].goal()).powi(2))
        })
        .collect::<Result<_>>()?;

    let surface: Vec<CellScore> = grid
        .cells()
        .into_iter()
        .zip(errors.chunks(targets.len()))
        .map(|((q, r, theta), e)| CellScore {
            q,
            r,
            theta,
            mse: e.iter().sum::<f64>() / e.len() as f64,
        })
        .collect();
    let best = surface
        .iter()
        .min_by(|a, b| {
            a.mse
                .total_cmp(&b.mse)
                .then(a.q.total_cmp(&b.q))
                .then(a.r.total_cmp(&b.r))
                .then(a.theta.cmp(&b.theta))
        })
        .cloned()
        .expect("nonempty grid");
    Ok(GlobalFit {
        best,
        words: targets.iter().map(|t| t.word.clone()).collect(),
        trials_per_cell,
        seed,
        surface,
    })
}

/// Stickiness minimizing `|mean simulated uses − goal|` with the global
/// parameters of `config` fixed; ties go to the smaller value.
pub fn tune_stickiness(
    target: &CalibrationTarget,
    config: &SimulationConfig,
    grid: &[f64],
    trials: usize,
    seed: u64,
    networks: &Networks,
    population: &Population,
) -> Result<StickinessFit> {
    if grid.is_empty() || grid.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::invalid(
            "stickiness grid must be nonempty and inside [0,1]",
        ));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    target.validate()?;
    config.validate()?;
    let seeds = dedup(&target.seeds);
    let prepared = prepare(networks, population, config, config.q, &seeds)?;
    let word = rng::label(&target.word) as usize;
    let surface: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&s| {
            let c = SimulationConfig {
                stickiness: s,
                ..config.clone()
            };
            let sim = mean_uses(networks, &prepared, &c, &seeds, word, trials, seed)?;
            Ok((s, (sim - target.goal()).abs()))
        })
        .collect::<Result<_>>()?;
    let &(stickiness, error) = surface
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))
        .expect("nonempty grid");
    Ok(StickinessFit {
        word: target.word.clone(),
        stickiness,
        error,
        surface,
    })
}
