use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::AgentId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct County {
    /// FIPS-style code, e.g. `"17031"`.
    pub code: String,
    pub lat: f64,
    pub lon: f64,
    pub urbanized_population: u64,
}

/// Agent-to-county mapping plus county metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CountyAssignment {
    counties: Vec<County>,
    index: HashMap<String, usize>,
    agent_county: Vec<usize>,
    agent_counts: Vec<usize>,
}

impl CountyAssignment {
    pub fn new(counties: Vec<County>, agent_county: Vec<usize>) -> Result<Self> {
        let mut index = HashMap::with_capacity(counties.len());
        for (i, c) in counties.iter().enumerate() {
            if index.insert(c.code.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate county code {}", c.code)));
            }
        }
        let mut agent_counts = vec![0usize; counties.len()];
        for (agent, &c) in agent_county.iter().enumerate() {
            if c >= counties.len() {
                return Err(Error::invalid(format!(
                    "agent {agent} assigned to county index {c} out of range"
                )));
            }
            agent_counts[c] += 1;
        }
        Ok(CountyAssignment {
            counties,
            index,
            agent_county,
            agent_counts,
        })
    }

    pub fn counties(&self) -> &[County] {
        &self.counties
    }

    pub fn county_count(&self) -> usize {
        self.counties.len()
    }

    pub fn agent_count(&self) -> usize {
        self.agent_county.len()
    }

    pub fn county_of(&self, agent: AgentId) -> usize {
        self.agent_county[agent as usize]
    }

    pub fn agent_counties(&self) -> &[usize] {
        &self.agent_county
    }

    /// Number of agents living in each county, indexed like [`Self::counties`].
    pub fn agents_per_county(&self) -> &[usize] {
        &self.agent_counts
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.index.get(code).copied()
    }

    /// Agents grouped by county, each list in ascending id order.
    pub fn members(&self) -> Vec<Vec<AgentId>> {
        let mut out = vec![Vec::new(); self.counties.len()];
        for (a, &c) in self.agent_county.iter().enumerate() {
            out[c].push(a as AgentId);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn county(code: &str) -> County {
        County {
            code: code.into(),
            lat: 0.0,
            lon: 0.0,
            urbanized_population: 0,
        }
    }

    #[test]
    fn counts_agents() {
        let a = CountyAssignment::new(vec![county("01001"), county("01003")], vec![0, 1, 1, 1])
            .unwrap();
        assert_eq!(a.agents_per_county(), &[1, 3]);
        assert_eq!(a.index_of("01003"), Some(1));
        assert_eq!(a.members()[1], vec![1, 2, 3]);
    }

    #[test]
    fn rejects_bad_index_and_duplicate_codes() {
        assert!(CountyAssignment::new(vec![county("1")], vec![0, 1]).is_err());
        assert!(CountyAssignment::new(vec![county("1"), county("1")], vec![]).is_err());
    }
}
