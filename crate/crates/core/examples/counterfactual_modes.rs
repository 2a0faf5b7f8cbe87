//! The same word under all four counterfactual modes with matched random
//! streams: only the network and the identity terms change.

use wordspread::engine::{run, Mode, Networks, SimulationConfig};
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let world = generate_world(&GeneratorSpec::new(
        3000,
        40,
        CategorySchema::with_sizes(&[2, 3, 2])?,
        0.9,
        10.0,
        4,
    ))?;
    let networks = Networks::new(world.graph.clone(), 17);
    for word in world.words.iter().take(3) {
        print!("{:6}", word.word);
        for mode in Mode::ALL {
            let c = SimulationConfig {
                mode,
                stickiness: 0.9,
                seed: 5,
                ..Default::default()
            };
            let log = run(&c, &networks, &world.population, None, &word.adopters)?;
            print!("  {}={:<6}", mode.as_str(), log.total_uses);
        }
        println!();
    }
    Ok(())
}
