//! Grid-search calibration on engine-generated counts: global (Q, r, θ)
//! over a reduced grid, then per-word stickiness.

use wordspread::calibration::{
    default_stickiness_grid, tune_global, tune_stickiness, CalibrationTarget, GlobalGrid,
};
use wordspread::engine::{run, Networks, SimulationConfig};
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let mut spec = GeneratorSpec::new(
        3000,
        40,
        CategorySchema::with_sizes(&[2, 3, 2])?,
        0.8,
        10.0,
        5,
    );
    spec.n_words = 4;
    let world = generate_world(&spec)?;
    let networks = Networks::from_parts(world.graph.clone(), world.graph.clone());
    let truth = SimulationConfig {
        r: 0.4,
        theta: 100,
        ..Default::default()
    };

    let targets: Vec<CalibrationTarget> = world
        .words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let c = SimulationConfig {
                stickiness: 0.9,
                seed: 1000 + i as u64,
                ..truth.clone()
            };
            let uses = run(&c, &networks, &world.population, None, &w.adopters)?.total_uses;
            let mut t = CalibrationTarget::new(w.word.clone(), w.adopters.clone(), uses);
            t.multiplier = 1.0;
            t.stickiness = 0.9;
            Ok(t)
        })
        .collect::<wordspread::Result<_>>()?;

    let grid = GlobalGrid {
        q: vec![0.75],
        r: vec![0.2, 0.4, 0.6],
        theta: vec![50, 100, 200],
    };
    let fit = tune_global(&targets, &grid, &truth, 3, 7, &networks, &world.population)?;
    println!(
        "best cell Q={} r={} θ={} (MSE {:.0})",
        fit.best.q, fit.best.r, fit.best.theta, fit.best.mse
    );

    let tuned = SimulationConfig {
        q: fit.best.q,
        r: fit.best.r,
        theta: fit.best.theta,
        ..truth
    };
    for t in &targets {
        let mut t = t.clone();
        t.stickiness = 1.0;
        let s = tune_stickiness(
            &t,
            &tuned,
            &default_stickiness_grid(),
            3,
            9,
            &networks,
            &world.population,
        )?;
        println!(
            "{}: S = {:.2} (truth 0.90), |error| {:.0} uses",
            s.word, s.stickiness, s.error
        );
    }
    Ok(())
}
