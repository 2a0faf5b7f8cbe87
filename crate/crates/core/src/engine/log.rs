use serde::{Deserialize, Serialize};

use crate::identity::WordIdentity;
use crate::network::{AgentId, CountyAssignment};

use super::SimulationConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Growth in cumulative uses fell below the stop threshold.
    Converged,
    /// The iteration cap was hit first.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: u32,
    pub adopters: Vec<AgentId>,
    /// `(county index, uses)` for counties with at least one use, ascending.
    pub county_counts: Vec<(usize, u32)>,
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdoptionLog {
    pub config: SimulationConfig,
    pub seeds: Vec<AgentId>,
    pub word_identity: Option<WordIdentity>,
    pub iterations: Vec<IterationRecord>,
    pub total_uses: u64,
    pub termination: Termination,
}

impl AdoptionLog {
    pub fn final_iteration(&self) -> u32 {
        self.iterations.last().map_or(0, |r| r.iteration)
    }

    pub fn is_truncated(&self) -> bool {
        self.termination == Termination::Truncated
    }

    /// Uses per county summed over the whole run.
    pub fn county_totals(&self, county_count: usize) -> Vec<u64> {
        let mut out = vec![0u64; county_count];
        for rec in &self.iterations {
            for &(c, n) in &rec.county_counts {
                out[c] += u64::from(n);
            }
        }
        out
    }

    /// Uses per county in consecutive blocks of `block_len` iterations,
    /// `out[block][county]`. Iteration 0 (the seeds) belongs to block 0.
    pub fn county_blocks(&self, county_count: usize, block_len: u32) -> Vec<Vec<u64>> {
        let block_len = block_len.max(1);
        let blocks = (self.final_iteration() / block_len + 1) as usize;
        let mut out = vec![vec![0u64; county_count]; blocks];
        for rec in &self.iterations {
            let b = (rec.iteration / block_len) as usize;
            for &(c, n) in &rec.county_counts {
                out[b][c] += u64::from(n);
            }
        }
        out
    }

    /// Per-agent time-ordered uses `(agent, iteration)`.
    pub fn usage_events(&self) -> Vec<(AgentId, f64)> {
        self.iterations
            .iter()
            .flat_map(|r| r.adopters.iter().map(move |&a| (a, f64::from(r.iteration))))
            .collect()
    }
}

pub(crate) fn count_by_county(
    adopters: &[AgentId],
    counties: Option<&CountyAssignment>,
) -> Vec<(usize, u32)> {
    let Some(c) = counties else { return Vec::new() };
    let mut idx: Vec<usize> = adopters.iter().map(|&a| c.county_of(a)).collect();
    idx.sort_unstable();
    let mut out: Vec<(usize, u32)> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some((last, n)) if *last == i => *n += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}
