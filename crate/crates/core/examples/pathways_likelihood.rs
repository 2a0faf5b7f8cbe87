//! Spatiotemporal pathways from usage logs, then the likelihood of one
//! mode's pathways under each counterfactual.

use wordspread::engine::{run, Mode, Networks, SimulationConfig};
use wordspread::geostats::pathway_likelihood;
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, EvaluationSettings, Evaluator, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let world = generate_world(&GeneratorSpec::new(
        4000,
        30,
        CategorySchema::with_sizes(&[2, 3, 2])?,
        0.8,
        10.0,
        21,
    ))?;
    let networks = Networks::new(world.graph.clone(), 3);
    let eval = Evaluator::new(&world, EvaluationSettings::default())?;
    let k = world.counties.county_count();

    let matrix = |mode: Mode, seed: u64| -> wordspread::Result<_> {
        let mut series = Vec::new();
        for w in &world.words {
            let c = SimulationConfig {
                mode,
                stickiness: 0.9,
                seed,
                ..Default::default()
            };
            let log = run(
                &c,
                &networks,
                &world.population,
                Some(&world.counties),
                &w.adopters,
            )?;
            series.push((w.word.clone(), log.county_blocks(k, 10)));
        }
        eval.pathways(series)
    };

    let reference = matrix(Mode::NetworkIdentity, 100)?;
    println!("{} pathways in the reference run", reference.len());
    for mode in Mode::ALL {
        let m = matrix(mode, 200)?;
        println!(
            "{:17} likelihood {:.4e}",
            mode.as_str(),
            pathway_likelihood(&reference, &m)?
        );
    }
    Ok(())
}
