//! Identity similarity on a log scale, rescaled onto `[0, 1]` over a
//! reference set.
//!
//! For a weighted register `m`, the raw similarity is
//! `s_m = max(1 - |a_m - b_m|, 1e-6)`. Its logarithm is mapped affinely from
//! the `[min, max]` range observed over the reference set onto `[0, 1]`, so
//! the most similar member of the set scores 1 on that register. A register
//! whose reference range is degenerate scores 1 for everyone. The registers
//! are combined with the word's register weights.

use crate::network::{AgentId, SocialGraph};

use super::{Population, WordIdentity};

pub const SIMILARITY_FLOOR: f64 = 1e-6;

#[inline]
fn log_similarity(a: f64, b: f64) -> f64 {
    (1.0 - (a - b).abs()).max(SIMILARITY_FLOOR).ln()
}

/// Per-register range of log-similarity to an anchor over a reference set.
#[derive(Debug, Clone, PartialEq)]
pub struct LogStats {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl LogStats {
    /// Range of log-similarity between `anchor` and each member of
    /// `reference`, for the registers the word weights.
    pub fn over<'a>(
        word: &WordIdentity,
        anchor: &[f64],
        reference: impl IntoIterator<Item = &'a [f64]>,
    ) -> Self {
        let d = anchor.len();
        let mut min = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for row in reference {
            for m in 0..d {
                if word.register_weights[m] == 0.0 {
                    continue;
                }
                let l = log_similarity(anchor[m], row[m]);
                min[m] = min[m].min(l);
                max[m] = max[m].max(l);
            }
        }
        LogStats { min, max }
    }
}

#[inline]
fn combine(word: &WordIdentity, anchor: &[f64], other: &[f64], stats: &LogStats) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (m, &v) in word.register_weights.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let (lo, hi) = (stats.min[m], stats.max[m]);
        let x = if hi > lo {
            ((log_similarity(anchor[m], other[m]) - lo) / (hi - lo)).clamp(0.0, 1.0)
        } else {
            1.0
        };
        num += v * x;
        den += v;
    }
    // num/den rather than num alone: when every x is 1 the quotient is exactly 1
    if den == 0.0 {
        1.0
    } else {
        (num / den).min(1.0)
    }
}

/// `δ_jw`: similarity of one agent to the word, given population statistics.
pub fn similarity_to_word(agent: &[f64], word: &WordIdentity, population_stats: &LogStats) -> f64 {
    combine(word, &word.anchor(), agent, population_stats)
}

/// `δ_ij`: similarity of neighbour `i` to agent `j`, given statistics over
/// `j`'s in-neighbourhood.
pub fn similarity_between_agents(
    i: &[f64],
    j: &[f64],
    word: &WordIdentity,
    neighborhood_stats: &LogStats,
) -> f64 {
    combine(word, j, i, neighborhood_stats)
}

/// `δ_jw` for every agent, normalized over the whole population.
pub fn word_similarities(population: &Population, word: &WordIdentity) -> Vec<f64> {
    if word.is_neutral() {
        return vec![1.0; population.len()];
    }
    let anchor = word.anchor();
    let stats = LogStats::over(word, &anchor, population.rows());
    population
        .rows()
        .map(|row| combine(word, &anchor, row, &stats))
        .collect()
}

/// `δ_ij` for every edge `i -> j` (indexed like the graph's edges), each
/// normalized over the target's in-neighbourhood.
pub fn neighbor_similarities(
    graph: &SocialGraph,
    population: &Population,
    word: &WordIdentity,
) -> Vec<f64> {
    let mut out = vec![1.0; graph.edge_count()];
    if word.is_neutral() {
        return out;
    }
    for j in 0..graph.node_count() as AgentId {
        let range = graph.in_range(j);
        if range.is_empty() {
            continue;
        }
        let anchor = population.row(j);
        let stats = LogStats::over(
            word,
            anchor,
            range.clone().map(|e| population.row(graph.source(e))),
        );
        for e in range {
            out[e] = combine(word, anchor, population.row(graph.source(e)), &stats);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::{category_weights, CategorySchema};
    use approx::assert_abs_diff_eq;

    fn word_on(schema: &CategorySchema, regs: &[bool]) -> WordIdentity {
        let w = category_weights(regs, schema);
        WordIdentity {
            registers: regs.to_vec(),
            category_weights: w.category,
            register_weights: w.register,
            threshold_used: 0.75,
            quantiles: vec![0.0; regs.len()],
        }
    }

    #[test]
    fn identical_agent_scores_one() {
        let s = CategorySchema::with_sizes(&[2, 1]).unwrap();
        let w = word_on(&s, &[true, false, true]);
        let pop = Population::new(
            s,
            vec![
                vec![1.0, 0.0, 1.0],
                vec![0.2, 0.9, 0.1],
                vec![0.5, 0.5, 0.5],
            ],
        )
        .unwrap();
        let d = word_similarities(&pop, &w);
        assert_eq!(d[0], 1.0);
        assert!(d.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn neutral_word_scores_one() {
        let s = CategorySchema::with_sizes(&[2]).unwrap();
        let w = WordIdentity::neutral(&s);
        let pop = Population::new(s, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(word_similarities(&pop, &w), vec![1.0, 1.0]);
        let stats = LogStats::over(&w, &w.anchor(), pop.rows());
        assert_eq!(similarity_to_word(pop.row(0), &w, &stats), 1.0);
    }

    #[test]
    fn three_agent_affine_log_rescaling() {
        // word signals register 0 (anchor 1.0); similarities 1.0, 0.5, 0.1
        let s = CategorySchema::with_sizes(&[1]).unwrap();
        let w = word_on(&s, &[true]);
        let pop = Population::new(s, vec![vec![1.0], vec![0.5], vec![0.1]]).unwrap();
        let d = word_similarities(&pop, &w);
        assert_eq!(d[0], 1.0);
        // (ln .5 - ln .1) / (ln 1 - ln .1)
        assert_abs_diff_eq!(d[1], 0.698_970_004_336_018_8, epsilon = 1e-12);
        assert_eq!(d[2], 0.0);
    }

    #[test]
    fn single_in_neighbour_scores_one() {
        let s = CategorySchema::with_sizes(&[1]).unwrap();
        let w = word_on(&s, &[true]);
        let pop = Population::new(s, vec![vec![0.0], vec![1.0]]).unwrap();
        let g = SocialGraph::from_mentions(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(neighbor_similarities(&g, &pop, &w), vec![1.0]);
    }

    #[test]
    fn two_in_neighbours_span_zero_to_one() {
        // target j = agent 2 at 0.7; neighbours at similarity 0.9 and 0.3
        let s = CategorySchema::with_sizes(&[1]).unwrap();
        let w = word_on(&s, &[true]);
        let pop = Population::new(s, vec![vec![0.6], vec![0.0], vec![0.7]]).unwrap();
        let g = SocialGraph::from_mentions(3, &[(0, 2, 1), (1, 2, 1)]).unwrap();
        let d = neighbor_similarities(&g, &pop, &w);
        assert_eq!(d, vec![1.0, 0.0]);
        let stats = LogStats::over(&w, pop.row(2), [pop.row(0), pop.row(1)]);
        assert_eq!(
            similarity_between_agents(pop.row(0), pop.row(2), &w, &stats),
            1.0
        );
    }

    #[test]
    fn identical_neighbour_scores_one() {
        let s = CategorySchema::with_sizes(&[2]).unwrap();
        let w = word_on(&s, &[true, true]);
        let pop = Population::new(s, vec![vec![0.3, 0.7], vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
        let g = SocialGraph::from_mentions(3, &[(0, 2, 1), (1, 2, 1)]).unwrap();
        let d = neighbor_similarities(&g, &pop, &w);
        assert_eq!(d[0], 1.0);
    }

    #[test]
    fn zero_similarity_is_floored() {
        let s = CategorySchema::with_sizes(&[1]).unwrap();
        let w = word_on(&s, &[true]);
        let pop = Population::new(s, vec![vec![1.0], vec![0.0]]).unwrap();
        let d = word_similarities(&pop, &w);
        assert_eq!(d, vec![1.0, 0.0]);
    }
}
