use std::collections::HashSet;

use crate::error::{Error, Result};

/// Dense 0-based agent identifier.
pub type AgentId = u32;

/// Borrowed view of one directed edge `source -> target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRef {
    pub index: usize,
    pub source: AgentId,
    pub target: AgentId,
    pub mentions: u32,
    pub weight: f64,
}

/// Weighted directed graph in compressed adjacency form.
///
/// Edges are stored once, grouped by target (the in-adjacency the engine
/// reads); the out-adjacency holds indices into that storage. An edge
/// `i -> j` means `i` influences `j`, and its mention count is the number of
/// times `j` mentioned `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    n: usize,
    in_offsets: Vec<usize>,
    sources: Vec<AgentId>,
    targets: Vec<AgentId>,
    mentions: Vec<u32>,
    weights: Vec<f64>,
    out_offsets: Vec<usize>,
    out_edges: Vec<usize>,
}

impl SocialGraph {
    /// Builds a graph from `(source, target, mention_count)` triples. Weights
    /// start at 1; use [`crate::network::compute_edge_weights`] to derive them.
    pub fn from_mentions(n: usize, edges: &[(AgentId, AgentId, u32)]) -> Result<Self> {
        let triples: Vec<_> = edges.iter().map(|&(s, t, m)| (s, t, m, 1.0)).collect();
        Self::from_weighted(n, triples)
    }

    /// Builds a graph from `(source, target, mention_count, weight)` tuples.
    pub fn from_weighted(n: usize, mut edges: Vec<(AgentId, AgentId, u32, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(s, t, _, w) in &edges {
            if s as usize >= n || t as usize >= n {
                return Err(Error::invalid(format!(
                    "edge {s}->{t} references an agent outside 0..{n}"
                )));
            }
            if s == t {
                return Err(Error::invalid(format!("self-loop on agent {s}")));
            }
            if !seen.insert((s, t)) {
                return Err(Error::invalid(format!("duplicate edge {s}->{t}")));
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::invalid(format!(
                    "edge {s}->{t} has weight {w} outside [0,1]"
                )));
            }
        }
        edges.sort_by_key(|&(s, t, _, _)| (t, s));

        let mut in_offsets = vec![0usize; n + 1];
        let mut out_deg = vec![0usize; n + 1];
        for &(s, t, _, _) in &edges {
            in_offsets[t as usize + 1] += 1;
            out_deg[s as usize + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
            out_deg[i + 1] += out_deg[i];
        }
        let out_offsets = out_deg;
        let mut cursor = out_offsets.clone();
        let mut out_edges = vec![0usize; edges.len()];
        for (idx, &(s, _, _, _)) in edges.iter().enumerate() {
            out_edges[cursor[s as usize]] = idx;
            cursor[s as usize] += 1;
        }

        Ok(SocialGraph {
            n,
            in_offsets,
            sources: edges.iter().map(|e| e.0).collect(),
            targets: edges.iter().map(|e| e.1).collect(),
            mentions: edges.iter().map(|e| e.2).collect(),
            weights: edges.iter().map(|e| e.3).collect(),
            out_offsets,
            out_edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.sources.len()
    }

    pub fn edge(&self, index: usize) -> EdgeRef {
        EdgeRef {
            index,
            source: self.sources[index],
            target: self.targets[index],
            mentions: self.mentions[index],
            weight: self.weights[index],
        }
    }

    /// All edges, grouped by target then ordered by source.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        (0..self.edge_count()).map(move |i| self.edge(i))
    }

    /// Range of edge indices whose target is `j`.
    #[inline]
    pub fn in_range(&self, j: AgentId) -> std::ops::Range<usize> {
        self.in_offsets[j as usize]..self.in_offsets[j as usize + 1]
    }

    pub fn in_edges(&self, j: AgentId) -> impl Iterator<Item = EdgeRef> + '_ {
        self.in_range(j).map(move |i| self.edge(i))
    }

    /// Edge indices whose source is `i`.
    #[inline]
    pub fn out_edge_indices(&self, i: AgentId) -> &[usize] {
        &self.out_edges[self.out_offsets[i as usize]..self.out_offsets[i as usize + 1]]
    }

    pub fn out_edges(&self, i: AgentId) -> impl Iterator<Item = EdgeRef> + '_ {
        self.out_edge_indices(i).iter().map(move |&e| self.edge(e))
    }

    pub fn in_degree(&self, j: AgentId) -> usize {
        self.in_range(j).len()
    }

    pub fn out_degree(&self, i: AgentId) -> usize {
        self.out_offsets[i as usize + 1] - self.out_offsets[i as usize]
    }

    #[inline]
    pub fn source(&self, edge: usize) -> AgentId {
        self.sources[edge]
    }

    #[inline]
    pub fn target(&self, edge: usize) -> AgentId {
        self.targets[edge]
    }

    #[inline]
    pub fn weight(&self, edge: usize) -> f64 {
        self.weights[edge]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn has_edge(&self, source: AgentId, target: AgentId) -> bool {
        let r = self.in_range(target);
        self.sources[r].binary_search(&source).is_ok()
    }

    pub(crate) fn with_weights(&self, weights: Vec<f64>) -> Self {
        debug_assert_eq!(weights.len(), self.edge_count());
        SocialGraph {
            weights,
            ..self.clone()
        }
    }

    /// `(source, target, mentions, weight)` tuples in storage order.
    pub fn to_tuples(&self) -> Vec<(AgentId, AgentId, u32, f64)> {
        self.edges()
            .map(|e| (e.source, e.target, e.mentions, e.weight))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_in_both_directions() {
        let g =
            SocialGraph::from_mentions(4, &[(0, 1, 2), (2, 1, 1), (1, 3, 5), (0, 3, 1)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        let ins: Vec<_> = g.in_edges(1).map(|e| e.source).collect();
        assert_eq!(ins, vec![0, 2]);
        let outs: Vec<_> = g.out_edges(0).map(|e| e.target).collect();
        assert_eq!(outs, vec![1, 3]);
        assert_eq!(g.in_degree(3), 2);
        assert_eq!(g.out_degree(2), 1);
        assert!(g.has_edge(1, 3));
        assert!(!g.has_edge(3, 1));
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(SocialGraph::from_mentions(2, &[(0, 0, 1)]).is_err());
        assert!(SocialGraph::from_mentions(2, &[(0, 1, 1), (0, 1, 3)]).is_err());
        assert!(SocialGraph::from_mentions(2, &[(0, 2, 1)]).is_err());
    }
}
