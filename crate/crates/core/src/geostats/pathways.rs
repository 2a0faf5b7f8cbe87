use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{CountyAssignment, SocialGraph};

use super::{zero_inflated_tau, PairClass, Urbanicity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordSeries {
    pub word: String,
    /// `blocks[t][county]` = normalized adoption `a_{i,t,w}`.
    pub blocks: Vec<Vec<f64>>,
}

/// Normalized adoption per county, time block and word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialTimeSeries {
    pub counties: Vec<String>,
    /// Iterations (simulated) or months (empirical) per block.
    pub block_length: u32,
    pub words: Vec<WordSeries>,
}

impl SpatialTimeSeries {
    /// Builds `a_{i,t,w} = n_{i,t,w} / (n_{t,w} · n_i)` from raw use counts
    /// `counts[t][county]` per word. Blocks without any use, and counties
    /// without agents, contribute 0.
    pub fn from_counts(
        counties: Vec<String>,
        agents_per_county: &[usize],
        block_length: u32,
        words: Vec<(String, Vec<Vec<u64>>)>,
    ) -> Result<Self> {
        let k = counties.len();
        if agents_per_county.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: agents_per_county.len(),
            });
        }
        let words = words
            .into_iter()
            .map(|(word, counts)| {
                let blocks = counts
                    .into_iter()
                    .map(|row| {
                        if row.len() != k {
                            return Err(Error::DimensionMismatch {
                                expected: k,
                                actual: row.len(),
                            });
                        }
                        let total: u64 = row.iter().sum();
                        Ok(row
                            .iter()
                            .zip(agents_per_county)
                            .map(|(&n, &size)| {
                                if total == 0 || size == 0 {
                                    0.0
                                } else {
                                    n as f64 / (total as f64 * size as f64)
                                }
                            })
                            .collect())
                    })
                    .collect::<Result<_>>()?;
                Ok(WordSeries { word, blocks })
            })
            .collect::<Result<_>>()?;
        Ok(SpatialTimeSeries {
            counties,
            block_length,
            words,
        })
    }

    /// County `i`'s series as a source (`t = 0..T-lag`) and as a target
    /// (`t = lag..T`), concatenated over words.
    fn lagged(&self, county: usize, lag: usize) -> (Vec<f64>, Vec<f64>) {
        let mut lead = Vec::new();
        let mut follow = Vec::new();
        for w in &self.words {
            let t = w.blocks.len();
            if t <= lag {
                continue;
            }
            lead.extend(w.blocks[..t - lag].iter().map(|b| b[county]));
            follow.extend(w.blocks[lag..].iter().map(|b| b[county]));
        }
        (lead, follow)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathwayEntry {
    pub source: usize,
    pub target: usize,
    pub tau: f64,
    pub edge_count: u32,
    pub class: PairClass,
}

/// Transmission strength for ordered county pairs, ordered by `(source, target)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathwayMatrix {
    pub counties: Vec<String>,
    pub entries: Vec<PathwayEntry>,
}

impl PathwayMatrix {
    pub fn get(&self, source: usize, target: usize) -> Option<f64> {
        self.entries
            .binary_search_by(|e| (e.source, e.target).cmp(&(source, target)))
            .ok()
            .map(|i| self.entries[i].tau)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Number of graph edges running from each county to each other county,
/// `out[source_county][target_county]`.
pub fn county_edge_counts(graph: &SocialGraph, counties: &CountyAssignment) -> Vec<Vec<u32>> {
    let k = counties.county_count();
    let mut out = vec![vec![0u32; k]; k];
    for e in graph.edges() {
        out[counties.county_of(e.source)][counties.county_of(e.target)] += 1;
    }
    out
}

/// Strength of every pathway `i -> j` (`i != j`) with at least `min_edges`
/// edges: zero-inflated tau between `i`'s word-concatenated series and `j`'s
/// series `lag` blocks later.
pub fn build_pathways(
    series: &SpatialTimeSeries,
    edge_counts: &[Vec<u32>],
    min_edges: u32,
    urbanicity: &[Urbanicity],
    lag: usize,
) -> Result<PathwayMatrix> {
    let k = series.counties.len();
    if edge_counts.len() != k || urbanicity.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: edge_counts.len().min(urbanicity.len()),
        });
    }
    if series.words.is_empty() {
        return Err(Error::invalid("pathways need at least one word"));
    }
    let lagged: Vec<(Vec<f64>, Vec<f64>)> = (0..k).map(|c| series.lagged(c, lag.max(1))).collect();
    if lagged.first().is_some_and(|l| l.0.len() < 2) {
        return Err(Error::invalid(
            "concatenated series are too short for pathways",
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && edge_counts[i][j] >= min_edges)
        .collect();
    let entries = pairs
        .par_iter()
        .map(|&(i, j)| {
            let tau = zero_inflated_tau(&lagged[i].0, &lagged[j].1)?;
            Ok(PathwayEntry {
                source: i,
                target: j,
                tau,
                edge_count: edge_counts[i][j],
                class: PairClass::of(urbanicity[i], urbanicity[j]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathwayMatrix {
        counties: series.counties.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(blocks: Vec<Vec<f64>>) -> SpatialTimeSeries {
        SpatialTimeSeries {
            counties: (0..blocks[0].len()).map(|i| i.to_string()).collect(),
            block_length: 10,
            words: vec![WordSeries {
                word: "w".into(),
                blocks,
            }],
        }
    }

    #[test]
    fn normalization() {
        let s = SpatialTimeSeries::from_counts(
            vec!["a".into(), "b".into()],
            &[2, 4],
            10,
            vec![("w".into(), vec![vec![2, 6], vec![0, 0]])],
        )
        .unwrap();
        assert_eq!(
            s.words[0].blocks[0],
            vec![2.0 / (8.0 * 2.0), 6.0 / (8.0 * 4.0)]
        );
        assert_eq!(s.words[0].blocks[1], vec![0.0, 0.0]);
    }

    #[test]
    fn delayed_copy_has_unit_strength() {
        let src = [0.3, 0.1, 0.7, 0.2, 0.9, 0.4];
        let blocks: Vec<Vec<f64>> = (0..6)
            .map(|t| vec![src[t], if t == 0 { 0.5 } else { src[t - 1] }])
            .collect();
        let counts = vec![vec![0, 10], vec![10, 0]];
        let m = build_pathways(
            &series(blocks),
            &counts,
            10,
            &[Urbanicity::Urban, Urbanicity::Rural],
            1,
        )
        .unwrap();
        assert_eq!(m.get(0, 1), Some(1.0));
        assert_eq!(m.entries[0].class, PairClass::UrbanRural);
    }

    #[test]
    fn sparse_pairs_are_omitted() {
        let blocks: Vec<Vec<f64>> = (0..5).map(|t| vec![t as f64, 1.0 + t as f64]).collect();
        let counts = vec![vec![0, 9], vec![10, 0]];
        let m = build_pathways(&series(blocks), &counts, 10, &[Urbanicity::Rural; 2], 1).unwrap();
        assert_eq!(m.get(0, 1), None);
        assert!(m.get(1, 0).is_some());
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn words_are_concatenated_without_crossing_boundaries() {
        let s = SpatialTimeSeries {
            counties: vec!["a".into()],
            block_length: 1,
            words: vec![
                WordSeries {
                    word: "x".into(),
                    blocks: vec![vec![1.0], vec![2.0], vec![3.0]],
                },
                WordSeries {
                    word: "y".into(),
                    blocks: vec![vec![4.0], vec![5.0]],
                },
            ],
        };
        let (lead, follow) = s.lagged(0, 1);
        assert_eq!(lead, vec![1.0, 2.0, 4.0]);
        assert_eq!(follow, vec![2.0, 3.0, 5.0]);
    }
}
