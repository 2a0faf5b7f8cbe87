//! Dialect-style regions: principal components of many words' county maps.

use wordspread::engine::{run, Networks, SimulationConfig};
use wordspread::geostats::principal_regions;
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let mut spec = GeneratorSpec::new(
        3000,
        40,
        CategorySchema::with_sizes(&[2, 3, 2])?,
        0.9,
        10.0,
        8,
    );
    spec.n_words = 30;
    let world = generate_world(&spec)?;
    let networks = Networks::new(world.graph.clone(), 0);
    let k = world.counties.county_count();
    let sizes = world.counties.agents_per_county();

    let rows: Vec<Vec<f64>> = world
        .words
        .iter()
        .map(|w| {
            let c = SimulationConfig {
                stickiness: 0.9,
                seed: 1,
                ..Default::default()
            };
            let totals = run(
                &c,
                &networks,
                &world.population,
                Some(&world.counties),
                &w.adopters,
            )?
            .county_totals(k);
            Ok(totals
                .iter()
                .zip(sizes)
                .map(|(&u, &n)| if n == 0 { 0.0 } else { u as f64 / n as f64 })
                .collect())
        })
        .collect::<wordspread::Result<_>>()?;

    let pr = principal_regions(&rows, 3)?;
    for (i, (l, v)) in pr
        .loadings
        .iter()
        .zip(&pr.explained_variance_ratio)
        .enumerate()
    {
        let mut top: Vec<usize> = (0..k).collect();
        top.sort_by(|&a, &b| l[b].total_cmp(&l[a]));
        let codes: Vec<&str> = top[..5]
            .iter()
            .map(|&c| world.counties.counties()[c].code.as_str())
            .collect();
        println!(
            "PC{} explains {:.1}%, strongest counties {codes:?}",
            i + 1,
            100.0 * v
        );
    }
    for w in &pr.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
