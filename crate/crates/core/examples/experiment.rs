//! End-to-end: synthetic world with observed usage, four modes, five trials,
//! then the summary table.
//!
//! `cargo run --release --example experiment -- /tmp/exp`

use wordspread::engine::SimulationConfig;
use wordspread::identity::CategorySchema;
use wordspread::io::{
    generate_world, run_experiment, synthesize_usage, ExperimentPlan, GeneratorSpec,
};

fn main() -> wordspread::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "experiment-out".into());
    let mut spec = GeneratorSpec::new(
        3000,
        40,
        CategorySchema::with_sizes(&[2, 3, 2])?,
        0.8,
        10.0,
        33,
    );
    spec.n_words = 8;
    let mut world = generate_world(&spec)?;
    let words: Vec<String> = world.words.iter().map(|w| w.word.clone()).collect();
    world.usage = Some(synthesize_usage(
        &world,
        &SimulationConfig::default(),
        &words,
        |_| 0.9,
        1,
    )?);

    let mut plan = ExperimentPlan {
        words,
        seed: 2,
        ..Default::default()
    };
    plan.stickiness = plan.words.iter().map(|w| (w.clone(), 0.9)).collect();
    let summary = run_experiment(&plan, &world, std::path::Path::new(&out))?;
    for m in &summary.modes {
        println!(
            "{:17} mean L {:>7}  likelihood {:>10}",
            m.mode.as_str(),
            m.mean_lees_l.map_or("-".into(), |l| format!("{l:.3}")),
            m.likelihood.map_or("-".into(), |l| format!("{l:.3e}"))
        );
    }
    println!("tables in {out}");
    Ok(())
}
