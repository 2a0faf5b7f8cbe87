use crate::error::{Error, Result};

use super::SocialGraph;

/// Tie strength from mention counts:
/// `w_ij = ln(1 + n_ij) / max_{k in N(j)} ln(1 + n_kj)`.
///
/// The `1 +` keeps single-mention ties at positive weight. Every node with
/// in-edges ends up with a maximum incoming weight of exactly 1.
pub fn compute_edge_weights(graph: &SocialGraph) -> Result<SocialGraph> {
    let mut weights = vec![0.0; graph.edge_count()];
    for j in 0..graph.node_count() as u32 {
        let range = graph.in_range(j);
        if range.is_empty() {
            continue;
        }
        let mut max_log = 0.0f64;
        for e in range.clone() {
            let n = graph.edge(e).mentions;
            if n == 0 {
                let src = graph.source(e);
                return Err(Error::invalid(format!(
                    "edge {src}->{j} has mention count 0"
                )));
            }
            max_log = max_log.max((n as f64).ln_1p());
        }
        for e in range {
            let l = (graph.edge(e).mentions as f64).ln_1p();
            // exact 1 at the maximum, not a rounded quotient
            weights[e] = if l == max_log { 1.0 } else { l / max_log };
        }
    }
    Ok(graph.with_weights(weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn weights_into(j: u32, g: &SocialGraph) -> Vec<(u32, f64)> {
        g.in_edges(j).map(|e| (e.source, e.weight)).collect()
    }

    #[test]
    fn equal_counts_give_unit_weights() {
        let g = SocialGraph::from_mentions(3, &[(0, 2, 5), (1, 2, 5)]).unwrap();
        let w = compute_edge_weights(&g).unwrap();
        assert_eq!(weights_into(2, &w), vec![(0, 1.0), (1, 1.0)]);
    }

    #[test]
    fn smoothed_log_ratio() {
        let g = SocialGraph::from_mentions(3, &[(0, 2, 1), (1, 2, 9)]).unwrap();
        let w = compute_edge_weights(&g).unwrap();
        let got = weights_into(2, &w);
        // ln 2 / ln 10
        assert_abs_diff_eq!(got[0].1, std::f64::consts::LOG10_2, epsilon = 1e-12);
        assert_eq!(got[1].1, 1.0);
    }

    #[test]
    fn single_in_neighbour_has_weight_one() {
        for n in [1, 2, 17, 1000] {
            let g = SocialGraph::from_mentions(2, &[(0, 1, n)]).unwrap();
            assert_eq!(compute_edge_weights(&g).unwrap().weight(0), 1.0);
        }
    }

    #[test]
    fn zero_mentions_rejected() {
        let g = SocialGraph::from_mentions(2, &[(0, 1, 0)]).unwrap();
        assert!(compute_edge_weights(&g).is_err());
    }

    #[test]
    fn weights_are_monotone_in_mentions() {
        let counts = [1u32, 3, 3, 8, 20, 2];
        let edges: Vec<_> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u32, 6, c))
            .collect();
        let w = compute_edge_weights(&SocialGraph::from_mentions(7, &edges).unwrap()).unwrap();
        let got = weights_into(6, &w);
        for a in &got {
            for b in &got {
                if counts[a.0 as usize] < counts[b.0 as usize] {
                    assert!(a.1 <= b.1);
                }
            }
        }
        assert_eq!(got.iter().map(|x| x.1).fold(0.0, f64::max), 1.0);
    }
}
