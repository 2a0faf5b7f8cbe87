//! Builds a homophilous synthetic world and writes it as a bundle.
//!
//! `cargo run --example generate_world -- /tmp/world`

use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, write_world, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "world".into());
    let schema = CategorySchema::with_sizes(&[2, 3, 2])?;
    let spec = GeneratorSpec::new(3000, 40, schema, 0.8, 10.0, 7);
    let world = generate_world(&spec)?;
    let urban = world
        .counties
        .counties()
        .iter()
        .filter(|c| c.urbanized_population >= 100_000)
        .count();
    println!(
        "{} agents, {} edges, {} counties ({urban} urban), {} words",
        world.ids.len(),
        world.graph.edge_count(),
        world.counties.county_count(),
        world.words.len()
    );
    let paths = write_world(&world, &dir)?;
    println!("graph at {}", paths.graph.display());
    Ok(())
}
