use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::rng;

use super::{AgentId, SocialGraph};

#[derive(Debug, Clone)]
pub struct ShuffleOutcome {
    pub graph: SocialGraph,
    /// Stub pairs the repair pass could not place. When non-zero the
    /// returned graph is the input graph, unchanged.
    pub unresolved: usize,
}

/// Degree-preserving rewiring by stub matching.
///
/// Out-stubs and in-stubs are paired at random; pairs that would form a
/// self-loop or a duplicate edge are repaired by swapping targets with an
/// already accepted edge, within a budget of ten attempts per edge. Each
/// in-stub carries its edge's weight and mention count, so every node keeps
/// its multiset of incoming weights.
pub fn shuffle_network(graph: &SocialGraph, seed: u64) -> ShuffleOutcome {
    let m = graph.edge_count();
    let mut rng = rng::sequential(seed, "shuffle");

    let mut out_stubs: Vec<AgentId> = graph.edges().map(|e| e.source).collect();
    out_stubs.sort_unstable();
    // (target, mentions, weight)
    let mut in_stubs: Vec<(AgentId, u32, f64)> = graph
        .edges()
        .map(|e| (e.target, e.mentions, e.weight))
        .collect();
    in_stubs.shuffle(&mut rng);

    let key = |s: AgentId, t: AgentId| (u64::from(s) << 32) | u64::from(t);
    let mut present: HashSet<u64> = HashSet::with_capacity(m);
    let mut accepted: Vec<(AgentId, (AgentId, u32, f64))> = Vec::with_capacity(m);
    let mut pending = Vec::new();
    for (s, stub) in out_stubs.into_iter().zip(in_stubs) {
        if s != stub.0 && present.insert(key(s, stub.0)) {
            accepted.push((s, stub));
        } else {
            pending.push((s, stub));
        }
    }

    let mut budget = 10 * m.max(1);
    let mut unresolved = Vec::new();
    for (s, stub) in pending {
        let mut placed = false;
        while budget > 0 && !accepted.is_empty() {
            budget -= 1;
            let pick = rng.random_range(0..accepted.len());
            let (s2, stub2) = accepted[pick];
            let (t, t2) = (stub.0, stub2.0);
            if s == t2 || s2 == t || present.contains(&key(s, t2)) || present.contains(&key(s2, t))
            {
                continue;
            }
            present.remove(&key(s2, t2));
            present.insert(key(s, t2));
            present.insert(key(s2, t));
            accepted[pick] = (s, stub2);
            accepted.push((s2, stub));
            placed = true;
            break;
        }
        if !placed {
            unresolved.push((s, stub));
        }
    }

    if !unresolved.is_empty() {
        log::warn!(
            "shuffle left {} stub pairs unresolved; keeping the input graph",
            unresolved.len()
        );
        return ShuffleOutcome {
            graph: graph.clone(),
            unresolved: unresolved.len(),
        };
    }

    let edges = accepted
        .into_iter()
        .map(|(s, (t, n, w))| (s, t, n, w))
        .collect();
    let graph = SocialGraph::from_weighted(graph.node_count(), edges)
        .expect("stub matching only emits valid edges");
    ShuffleOutcome {
        graph,
        unresolved: 0,
    }
}
