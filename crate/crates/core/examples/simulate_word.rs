//! One word, one run: adopters per iteration until the spread stalls.

use wordspread::engine::{run, Networks, SimulationConfig};
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let world = generate_world(&GeneratorSpec::new(
        2000,
        30,
        CategorySchema::with_sizes(&[2, 3])?,
        0.8,
        10.0,
        1,
    ))?;
    let networks = Networks::new(world.graph.clone(), 99);
    let config = SimulationConfig {
        stickiness: 0.9,
        seed: 3,
        ..Default::default()
    };
    let word = &world.words[0];
    let log = run(
        &config,
        &networks,
        &world.population,
        Some(&world.counties),
        &word.adopters,
    )?;

    if let Some(id) = &log.word_identity {
        println!(
            "{} signals registers {:?} (threshold {:.2})",
            word.word, id.registers, id.threshold_used
        );
    }
    for rec in log.iterations.iter().step_by(10) {
        println!(
            "t={:4}  adopters={:5}  counties={}",
            rec.iteration,
            rec.adopters.len(),
            rec.county_counts.len()
        );
    }
    println!(
        "{} uses, stopped at {} ({:?})",
        log.total_uses,
        log.final_iteration(),
        log.termination
    );
    Ok(())
}
