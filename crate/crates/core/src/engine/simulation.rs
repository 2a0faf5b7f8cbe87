use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::identity::{
    enregister_word, neighbor_similarities, word_similarities, Population, WordIdentity,
};
use crate::network::{shuffle_network, AgentId, CountyAssignment, SocialGraph};
use crate::rng;

use super::log::{count_by_county, AdoptionLog, IterationRecord, Termination};
use super::{Mode, SimulationConfig};

/// Novelty `η = ½·[cos(π·min(n, θ)/θ) + 1]`.
#[inline]
pub fn novelty(exposures: u32, theta: u32) -> f64 {
    let x = exposures.min(theta) as f64 / theta as f64;
    0.5 * ((x * PI).cos() + 1.0)
}

/// The observed graph together with its degree-preserving shuffle.
#[derive(Debug, Clone)]
pub struct Networks {
    pub observed: SocialGraph,
    pub shuffled: SocialGraph,
}

impl Networks {
    pub fn new(observed: SocialGraph, shuffle_seed: u64) -> Self {
        let out = shuffle_network(&observed, shuffle_seed);
        Networks {
            observed,
            shuffled: out.graph,
        }
    }

    pub fn from_parts(observed: SocialGraph, shuffled: SocialGraph) -> Self {
        Networks { observed, shuffled }
    }

    pub fn for_mode(&self, mode: Mode) -> &SocialGraph {
        if mode.uses_shuffled_network() {
            &self.shuffled
        } else {
            &self.observed
        }
    }
}

/// Per-word quantities that stay fixed during a run: `δ_jw` per agent, the
/// product `w_ij·δ_ij` per edge, and its sum over each agent's in-edges.
#[derive(Debug, Clone)]
pub struct PreparedWord {
    pub word_identity: Option<WordIdentity>,
    word_similarity: Option<Vec<f64>>,
    edge_factor: Vec<f64>,
    denominator: Vec<f64>,
}

impl PreparedWord {
    pub fn new(
        graph: &SocialGraph,
        population: &Population,
        seeds: &[AgentId],
        q: f64,
        identity: bool,
    ) -> Result<Self> {
        if !identity {
            let edge_factor = graph.weights().to_vec();
            let denominator = denominators(graph, &edge_factor);
            return Ok(PreparedWord {
                word_identity: None,
                word_similarity: None,
                edge_factor,
                denominator,
            });
        }
        let adopters: Vec<&[f64]> = seeds.iter().map(|&a| population.row(a)).collect();
        let word = enregister_word(&adopters, population, q)?;
        let word_similarity = word_similarities(population, &word);
        let delta = neighbor_similarities(graph, population, &word);
        let edge_factor: Vec<f64> = graph
            .weights()
            .iter()
            .zip(&delta)
            .map(|(w, d)| w * d)
            .collect();
        let denominator = denominators(graph, &edge_factor);
        Ok(PreparedWord {
            word_identity: Some(word),
            word_similarity: Some(word_similarity),
            edge_factor,
            denominator,
        })
    }

    #[inline]
    fn delta_word(&self, j: usize) -> f64 {
        self.word_similarity.as_ref().map_or(1.0, |v| v[j])
    }
}

fn denominators(graph: &SocialGraph, factor: &[f64]) -> Vec<f64> {
    (0..graph.node_count() as AgentId)
        .map(|j| graph.in_range(j).map(|e| factor[e]).sum())
        .collect()
}

/// Mutable per-run state.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub p: Vec<f64>,
    pub exposures: Vec<u32>,
    pub ever_exposed: Vec<bool>,
    /// Exposed agents in order of first exposure.
    pub exposed: Vec<AgentId>,
    pub current_adopters: Vec<AgentId>,
    pub uses_per_agent: Vec<u32>,
    pub total_uses: u64,
    pub iteration: u32,
}

/// One word spreading through one graph.
pub struct Simulation<'a> {
    graph: &'a SocialGraph,
    prepared: PreparedWord,
    config: SimulationConfig,
    state: SimulationState,
    seeds: Vec<AgentId>,
    // scratch, reset after every step
    numerator: Vec<f64>,
    new_exposures: Vec<u32>,
    touched: Vec<AgentId>,
}

fn dedup_seeds(graph: &SocialGraph, seeds: &[AgentId]) -> Result<Vec<AgentId>> {
    let mut seen = vec![false; graph.node_count()];
    let mut out = Vec::with_capacity(seeds.len());
    for &s in seeds {
        if s as usize >= graph.node_count() {
            return Err(Error::UnknownAgent(s.to_string()));
        }
        if !std::mem::replace(&mut seen[s as usize], true) {
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(Error::invalid("no seed adopters"));
    }
    Ok(out)
}

/// Sets `adopt(0)` to the (deduplicated) seeds and fixes the word's identity
/// from them. Modes without identity skip enregisterment.
pub fn seed_simulation<'a>(
    word_seed: &[AgentId],
    config: &SimulationConfig,
    networks: &'a Networks,
    population: &Population,
) -> Result<Simulation<'a>> {
    config.validate()?;
    let graph = networks.for_mode(config.mode);
    if population.len() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            actual: population.len(),
        });
    }
    let seeds = dedup_seeds(graph, word_seed)?;
    let prepared = PreparedWord::new(
        graph,
        population,
        &seeds,
        config.q,
        config.mode.uses_identity(),
    )?;
    Ok(Simulation::with_prepared(
        graph,
        prepared,
        config.clone(),
        seeds,
    ))
}

impl<'a> Simulation<'a> {
    /// Starts a run from an already prepared word, skipping enregisterment.
    pub fn with_prepared(
        graph: &'a SocialGraph,
        prepared: PreparedWord,
        config: SimulationConfig,
        seeds: Vec<AgentId>,
    ) -> Self {
        let n = graph.node_count();
        let mut uses_per_agent = vec![0; n];
        for &s in &seeds {
            uses_per_agent[s as usize] += 1;
        }
        let state = SimulationState {
            p: vec![0.0; n],
            exposures: vec![0; n],
            ever_exposed: vec![false; n],
            exposed: Vec::new(),
            current_adopters: seeds.clone(),
            uses_per_agent,
            total_uses: seeds.len() as u64,
            iteration: 0,
        };
        Simulation {
            graph,
            prepared,
            config,
            state,
            seeds,
            numerator: vec![0.0; n],
            new_exposures: vec![0; n],
            touched: Vec::new(),
        }
    }

    pub fn state(&self) -> &SimulationState {
        &self.state
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn seeds(&self) -> &[AgentId] {
        &self.seeds
    }

    pub fn word_identity(&self) -> Option<&WordIdentity> {
        self.prepared.word_identity.as_ref()
    }

    /// Advances from iteration `t` to `t + 1`.
    ///
    /// Every agent with an adopting in-neighbour gets
    /// `p = δ_jw·S_w·η(n_j)·Σ_{adopting i} w_ij δ_ij / Σ_{k in N(j)} w_kj δ_kj`,
    /// using its exposure count before this iteration; previously exposed
    /// agents without one decay to `r·p`. Exposed agents then adopt
    /// independently with probability `p`.
    pub fn step(&mut self) -> Result<()> {
        let g = self.graph;
        let st = &mut self.state;
        for &i in &st.current_adopters {
            for &e in g.out_edge_indices(i) {
                let j = g.target(e);
                if self.new_exposures[j as usize] == 0 {
                    self.touched.push(j);
                }
                self.new_exposures[j as usize] += 1;
                self.numerator[j as usize] += self.prepared.edge_factor[e];
            }
        }

        for &j in &self.touched {
            let ju = j as usize;
            let den = self.prepared.denominator[ju];
            let ratio = if den > 0.0 {
                (self.numerator[ju] / den).min(1.0)
            } else {
                0.0
            };
            let p = self.prepared.delta_word(ju)
                * self.config.stickiness
                * novelty(st.exposures[ju], self.config.theta)
                * ratio;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Internal(format!(
                    "p = {p} for agent {j} at iteration {}",
                    st.iteration
                )));
            }
            st.p[ju] = p;
            st.exposures[ju] = st.exposures[ju].saturating_add(self.new_exposures[ju]);
            if !st.ever_exposed[ju] {
                st.ever_exposed[ju] = true;
                st.exposed.push(j);
            }
        }

        let next = st.iteration + 1;
        let mut adopters = Vec::new();
        for &j in &st.exposed {
            let ju = j as usize;
            if self.new_exposures[ju] == 0 {
                st.p[ju] *= self.config.r;
            }
            if st.p[ju] > 0.0
                && rng::uniform(self.config.seed, u64::from(j), u64::from(next)) < st.p[ju]
            {
                adopters.push(j);
            }
        }
        adopters.sort_unstable();

        for &j in &self.touched {
            self.new_exposures[j as usize] = 0;
            self.numerator[j as usize] = 0.0;
        }
        self.touched.clear();

        for &a in &adopters {
            st.uses_per_agent[a as usize] += 1;
        }
        st.total_uses += adopters.len() as u64;
        st.current_adopters = adopters;
        st.iteration = next;
        Ok(())
    }

    /// Steps until growth in cumulative uses over the stop window drops below
    /// the threshold (after the minimum iteration count) or the cap is hit.
    /// `observe` sees every iteration's adopters, including the seeds at 0.
    pub fn run_with(&mut self, mut observe: impl FnMut(u32, &[AgentId])) -> Result<Termination> {
        let window = self.config.stop_window as usize;
        let mut cumulative = vec![self.state.total_uses];
        observe(0, &self.state.current_adopters);
        loop {
            let t = self.state.iteration;
            if t >= self.config.min_iterations && t as usize >= window {
                let then = cumulative[t as usize - window] as f64;
                let now = cumulative[t as usize] as f64;
                if now - then < self.config.stop_growth * then {
                    return Ok(Termination::Converged);
                }
            }
            if t >= self.config.max_iterations {
                return Ok(Termination::Truncated);
            }
            self.step()?;
            cumulative.push(self.state.total_uses);
            observe(self.state.iteration, &self.state.current_adopters);
        }
    }
}

/// Runs one word to termination and records every iteration.
pub fn run(
    config: &SimulationConfig,
    networks: &Networks,
    population: &Population,
    counties: Option<&CountyAssignment>,
    word_seed: &[AgentId],
) -> Result<AdoptionLog> {
    let mut sim = seed_simulation(word_seed, config, networks, population)?;
    let mut iterations = Vec::new();
    let termination = sim.run_with(|t, adopters| {
        iterations.push(IterationRecord {
            iteration: t,
            adopters: adopters.to_vec(),
            county_counts: count_by_county(adopters, counties),
        })
    })?;
    if termination == Termination::Truncated {
        log::warn!("run hit max_iterations = {}", config.max_iterations);
    }
    Ok(AdoptionLog {
        config: config.clone(),
        seeds: sim.seeds.clone(),
        word_identity: sim.prepared.word_identity.clone(),
        iterations,
        total_uses: sim.state.total_uses,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::CategorySchema;
    use approx::assert_abs_diff_eq;

    fn flat_population(n: usize) -> Population {
        Population::uniform(CategorySchema::with_sizes(&[1]).unwrap(), n, 0.5).unwrap()
    }

    fn config(mode: Mode) -> SimulationConfig {
        SimulationConfig {
            mode,
            stickiness: 1.0,
            ..Default::default()
        }
    }

    #[test]
    fn novelty_endpoints() {
        assert_eq!(novelty(0, 100), 1.0);
        assert_eq!(novelty(100, 100), 0.0);
        assert_eq!(novelty(250, 100), 0.0);
        assert_abs_diff_eq!(novelty(50, 100), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn all_neighbours_adopting_gives_certainty() {
        // 0,1 -> 2
        let g = SocialGraph::from_mentions(3, &[(0, 2, 1), (1, 2, 1)]).unwrap();
        let nets = Networks::from_parts(g.clone(), g);
        let pop = flat_population(3);
        let mut sim =
            seed_simulation(&[0, 1], &config(Mode::NetworkIdentity), &nets, &pop).unwrap();
        sim.step().unwrap();
        assert_eq!(sim.state().p[2], 1.0);
        assert_eq!(sim.state().current_adopters, vec![2]);
        assert_eq!(sim.state().exposures[2], 2);
    }

    #[test]
    fn half_neighbours_adopting_gives_half() {
        let g = SocialGraph::from_mentions(3, &[(0, 2, 1), (1, 2, 1)]).unwrap();
        let nets = Networks::from_parts(g.clone(), g);
        let pop = flat_population(3);
        let mut sim = seed_simulation(&[0], &config(Mode::NetworkOnly), &nets, &pop).unwrap();
        sim.step().unwrap();
        assert_eq!(sim.state().p[2], 0.5);
    }

    #[test]
    fn exposed_agent_decays_without_exposure() {
        let g = SocialGraph::from_mentions(3, &[(0, 2, 1), (1, 2, 1)]).unwrap();
        let nets = Networks::from_parts(g.clone(), g);
        let pop = flat_population(3);
        let mut sim = seed_simulation(&[0], &config(Mode::NetworkOnly), &nets, &pop).unwrap();
        sim.step().unwrap();
        let p0 = sim.state().p[2];
        // agent 0 does not re-adopt: it has no in-edges, so never exposed
        sim.step().unwrap();
        assert_abs_diff_eq!(sim.state().p[2], 0.4 * p0, epsilon = 1e-15);
        sim.step().unwrap();
        assert_abs_diff_eq!(sim.state().p[2], 0.4 * 0.4 * p0, epsilon = 1e-15);
    }

    #[test]
    fn isolated_seeds_stop_at_min_iterations() {
        let g = SocialGraph::from_mentions(4, &[(2, 3, 1)]).unwrap();
        let nets = Networks::from_parts(g.clone(), g);
        let log = run(
            &config(Mode::NetworkIdentity),
            &nets,
            &flat_population(4),
            None,
            &[0, 1],
        )
        .unwrap();
        assert_eq!(log.final_iteration(), 100);
        assert_eq!(log.total_uses, 2);
        assert_eq!(log.termination, Termination::Converged);
    }

    #[test]
    fn zero_stickiness_never_spreads() {
        let edges: Vec<_> = (0..20u32)
            .flat_map(|i| (0..20u32).filter(move |&j| j != i).map(move |j| (i, j, 1)))
            .collect();
        let g = SocialGraph::from_mentions(20, &edges).unwrap();
        let nets = Networks::from_parts(g.clone(), g);
        let cfg = SimulationConfig {
            stickiness: 0.0,
            ..config(Mode::NetworkOnly)
        };
        let log = run(&cfg, &nets, &flat_population(20), None, &[0, 1, 2]).unwrap();
        assert_eq!(log.total_uses, 3);
    }

    #[test]
    fn duplicate_and_unknown_seeds() {
        let g = SocialGraph::from_mentions(3, &[(0, 1, 1)]).unwrap();
        let nets = Networks::from_parts(g.clone(), g);
        let pop = flat_population(3);
        let sim = seed_simulation(&[1, 0, 1, 0], &config(Mode::NetworkOnly), &nets, &pop).unwrap();
        assert_eq!(sim.seeds(), &[1, 0]);
        assert_eq!(sim.state().current_adopters.len(), 2);
        assert!(matches!(
            seed_simulation(&[7], &config(Mode::NetworkOnly), &nets, &pop),
            Err(Error::UnknownAgent(_))
        ));
    }

    #[test]
    fn network_only_has_no_word_identity() {
        let g = SocialGraph::from_mentions(3, &[(0, 1, 1)]).unwrap();
        let nets = Networks::from_parts(g.clone(), g);
        let pop = flat_population(3);
        assert!(
            seed_simulation(&[0], &config(Mode::NetworkOnly), &nets, &pop)
                .unwrap()
                .word_identity()
                .is_none()
        );
        assert!(seed_simulation(&[0], &config(Mode::Null), &nets, &pop)
            .unwrap()
            .word_identity()
            .is_none());
        assert!(
            seed_simulation(&[0], &config(Mode::NetworkIdentity), &nets, &pop)
                .unwrap()
                .word_identity()
                .is_some()
        );
    }
}
