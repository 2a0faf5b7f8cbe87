//! Degree-preserving rewiring, the network used by the identity-only and
//! null modes.

use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec};
use wordspread::network::{shuffle_network, AgentId};

fn main() -> wordspread::Result<()> {
    let world = generate_world(&GeneratorSpec::new(
        2000,
        30,
        CategorySchema::with_sizes(&[2])?,
        1.0,
        8.0,
        2,
    ))?;
    let g = &world.graph;
    let out = shuffle_network(g, 11);
    let s = &out.graph;
    let same = (0..g.node_count() as AgentId)
        .all(|v| g.in_degree(v) == s.in_degree(v) && g.out_degree(v) == s.out_degree(v));
    let kept = s.edges().filter(|e| g.has_edge(e.source, e.target)).count();
    let local = |gr: &wordspread::network::SocialGraph| {
        gr.edges()
            .filter(|e| world.counties.county_of(e.source) == world.counties.county_of(e.target))
            .count()
    };
    println!(
        "degrees preserved: {same}, unresolved stubs: {}",
        out.unresolved
    );
    println!("edges kept in place: {kept} of {}", g.edge_count());
    println!(
        "within-county edges: {} before, {} after",
        local(g),
        local(s)
    );
    Ok(())
}
