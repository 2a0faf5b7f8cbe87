#![allow(dead_code)]

use rand::Rng;
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec, WorldBundle};
use wordspread::network::{AgentId, SocialGraph};
use wordspread::rng;

/// Homophilous desk-scale world.
pub fn world(n_agents: usize, n_words: usize, seed: u64) -> WorldBundle {
    let mut spec = GeneratorSpec::new(
        n_agents,
        60,
        CategorySchema::with_sizes(&[2, 3, 2]).unwrap(),
        0.8,
        10.0,
        seed,
    );
    spec.n_words = n_words;
    generate_world(&spec).unwrap()
}

/// Random simple digraph with `n` nodes and about `m` edges.
pub fn random_graph(n: usize, m: usize, seed: u64) -> SocialGraph {
    let mut r = rng::sequential(seed, "test-graph");
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    let m = m.min(n * (n - 1));
    while edges.len() < m {
        let s = r.random_range(0..n) as AgentId;
        let t = r.random_range(0..n) as AgentId;
        if s != t && seen.insert((s, t)) {
            edges.push((s, t, r.random_range(1..50u32)));
        }
    }
    wordspread::network::compute_edge_weights(&SocialGraph::from_mentions(n, &edges).unwrap())
        .unwrap()
}

/// Prints the criterion line straight to stdout, past the test harness's
/// capture, so it shows for passing tests too.
pub fn verdict(id: u32, name: &str, pass: bool, detail: &str) -> bool {
    use std::io::Write;
    let line = format!(
        "criterion {id} [{}] {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes())
        .and_then(|_| out.flush())
        .unwrap();
    pass
}
