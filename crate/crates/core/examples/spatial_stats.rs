//! County aggregation, Getis-Ord smoothing and Lee's L between two runs.

use wordspread::engine::{run, Mode, Networks, SimulationConfig};
use wordspread::geostats::{classify_similarity, getis_ord_smooth, lees_l, SpatialWeights};
use wordspread::identity::CategorySchema;
use wordspread::io::{generate_world, GeneratorSpec};

fn main() -> wordspread::Result<()> {
    let world = generate_world(&GeneratorSpec::new(
        4000,
        50,
        CategorySchema::with_sizes(&[2, 3, 2])?,
        0.8,
        10.0,
        12,
    ))?;
    let networks = Networks::new(world.graph.clone(), 1);
    let word = &world.words[1];
    let k = world.counties.county_count();
    let weights = SpatialWeights::knn(
        &world
            .counties
            .counties()
            .iter()
            .map(|c| (c.lat, c.lon))
            .collect::<Vec<_>>(),
        10,
    )?;

    let mut maps = Vec::new();
    for (mode, seed) in [
        (Mode::NetworkIdentity, 1),
        (Mode::NetworkIdentity, 2),
        (Mode::Null, 1),
    ] {
        let c = SimulationConfig {
            mode,
            stickiness: 0.9,
            seed,
            ..Default::default()
        };
        let totals = run(
            &c,
            &networks,
            &world.population,
            Some(&world.counties),
            &word.adopters,
        )?
        .county_totals(k);
        let codes: Vec<&str> = world
            .counties
            .counties()
            .iter()
            .map(|c| c.code.as_str())
            .collect();
        let agg =
            wordspread::geostats::aggregate(codes.into_iter().zip(totals), &world.counties, true);
        maps.push(getis_ord_smooth(&agg.distribution, &weights)?.distribution);
    }
    for (name, other) in [("second trial", &maps[1]), ("null mode", &maps[2])] {
        match lees_l(&maps[0].values, &other.values, &weights) {
            Some(l) => println!("{name}: L = {l:.3} ({:?})", classify_similarity(l)),
            None => println!("{name}: constant map"),
        }
    }
    Ok(())
}
