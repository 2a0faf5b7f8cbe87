use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

use super::{AgentId, CountyAssignment, SocialGraph};

/// Square county-by-county affinity matrix (social-connectedness style).
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl AffinityMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: values.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::invalid(format!(
                        "affinity ({i},{j}) = {v} is not a finite nonnegative value"
                    )));
                }
                if v != values[j * n + i] {
                    return Err(Error::invalid(format!(
                        "affinity matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(AffinityMatrix { n, values })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

/// Synthetic network whose county-to-county edge volume follows
/// `SC_ij * N_i * N_j`, normalized so the graph has `total_edges` edges.
///
/// Each edge independently picks an ordered county pair with probability
/// proportional to that product, then endpoints uniformly inside each county;
/// self-loops and duplicates are redrawn. All weights are 1.
pub fn generate_sci_network(
    sci: &AffinityMatrix,
    counties: &CountyAssignment,
    total_edges: usize,
    seed: u64,
) -> Result<SocialGraph> {
    let k = counties.county_count();
    if k == 0 || counties.agent_count() == 0 {
        return Err(Error::invalid("no counties or agents"));
    }
    if sci.size() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: sci.size(),
        });
    }
    let sizes = counties.agents_per_county();
    let members = counties.members();
    let mut pairs = Vec::new();
    let mut mass = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let m = sci.get(i, j) * sizes[i] as f64 * sizes[j] as f64;
            if m > 0.0 {
                pairs.push((i, j));
                mass.push(m);
            }
        }
    }
    if mass.is_empty() {
        return Err(Error::invalid(
            "total affinity between populated counties is zero",
        ));
    }

    let mut r = rng::sequential(seed, "sci-network");
    let picker = WeightedIndex::new(&mass).map_err(|e| Error::invalid(e.to_string()))?;
    let mut per_pair = vec![0usize; pairs.len()];
    for _ in 0..total_edges {
        per_pair[picker.sample(&mut r)] += 1;
    }

    let mut seen = HashSet::with_capacity(total_edges);
    let mut edges = Vec::with_capacity(total_edges);
    for (p, &count) in per_pair.iter().enumerate() {
        let (ci, cj) = pairs[p];
        let capacity = if ci == cj {
            sizes[ci] * sizes[ci].saturating_sub(1)
        } else {
            sizes[ci] * sizes[cj]
        };
        if count > capacity {
            return Err(Error::invalid(format!(
                "county pair ({}, {}) needs {count} distinct edges but only {capacity} exist",
                counties.counties()[ci].code,
                counties.counties()[cj].code
            )));
        }
        let mut placed = 0;
        while placed < count {
            let s: AgentId = members[ci][r.random_range(0..members[ci].len())];
            let t: AgentId = members[cj][r.random_range(0..members[cj].len())];
            if s != t && seen.insert((s, t)) {
                edges.push((s, t, 1, 1.0));
                placed += 1;
            }
        }
    }
    SocialGraph::from_weighted(counties.agent_count(), edges)
}
