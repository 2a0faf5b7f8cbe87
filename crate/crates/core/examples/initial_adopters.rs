//! Resampling a word's seed adopters from its first uses, to check that
//! results do not hinge on the exact seed set.

use wordspread::engine::{run, sample_initial_adopters, Networks, SimulationConfig};
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let world = generate_world(&GeneratorSpec::new(
        3000,
        40,
        CategorySchema::with_sizes(&[2, 3])?,
        0.8,
        10.0,
        6,
    ))?;
    let networks = Networks::new(world.graph.clone(), 0);
    let config = SimulationConfig {
        stickiness: 0.9,
        seed: 8,
        ..Default::default()
    };
    let observed = run(
        &config,
        &networks,
        &world.population,
        None,
        &world.words[0].adopters,
    )?;
    let log = observed.usage_events();

    for draw in 0..5 {
        let seeds = sample_initial_adopters(&log, 10, 50, draw)?;
        let c = SimulationConfig {
            seed: 100 + draw,
            ..config.clone()
        };
        let uses = run(&c, &networks, &world.population, None, &seeds)?.total_uses;
        println!("draw {draw}: seeds {seeds:?} -> {uses} uses");
    }
    Ok(())
}
