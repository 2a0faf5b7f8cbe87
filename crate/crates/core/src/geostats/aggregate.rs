use serde::{Deserialize, Serialize};

use crate::network::CountyAssignment;

/// One value per county over a fixed county universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialDistribution {
    pub counties: Vec<String>,
    pub values: Vec<f64>,
    pub word: String,
    /// `"empirical"` or a mode name.
    pub source: String,
    pub smoothed: bool,
}

impl SpatialDistribution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, code: &str) -> Option<f64> {
        self.counties
            .iter()
            .position(|c| c == code)
            .map(|i| self.values[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    pub distribution: SpatialDistribution,
    /// Counties dropped from the universe because they have no agents.
    pub excluded: Vec<String>,
    /// Records whose county code was not recognised.
    pub rejected: Vec<String>,
}

/// Sums `(county_code, uses)` records per county; with `per_capita`, divides
/// by the county's agent count. The universe is every county with agents.
pub fn aggregate<'a>(
    records: impl IntoIterator<Item = (&'a str, u64)>,
    counties: &CountyAssignment,
    per_capita: bool,
) -> Aggregation {
    let mut uses = vec![0u64; counties.county_count()];
    let mut rejected = Vec::new();
    for (code, n) in records {
        match counties.index_of(code) {
            Some(i) => uses[i] += n,
            None => {
                log::warn!("usage record for unknown county {code}");
                rejected.push(code.to_string());
            }
        }
    }
    let sizes = counties.agents_per_county();
    let mut codes = Vec::new();
    let mut values = Vec::new();
    let mut excluded = Vec::new();
    for (i, c) in counties.counties().iter().enumerate() {
        if sizes[i] == 0 {
            excluded.push(c.code.clone());
            continue;
        }
        codes.push(c.code.clone());
        values.push(if per_capita {
            uses[i] as f64 / sizes[i] as f64
        } else {
            uses[i] as f64
        });
    }
    Aggregation {
        distribution: SpatialDistribution {
            counties: codes,
            values,
            word: String::new(),
            source: String::new(),
            smoothed: false,
        },
        excluded,
        rejected,
    }
}
