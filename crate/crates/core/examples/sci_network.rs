//! A synthetic network drawn from county-pair affinities, scaled by county
//! populations.

use wordspread::network::{generate_sci_network, AffinityMatrix, County, CountyAssignment};

fn main() -> wordspread::Result<()> {
    let counties = vec![
        County {
            code: "A".into(),
            lat: 40.0,
            lon: -75.0,
            urbanized_population: 1_500_000,
        },
        County {
            code: "B".into(),
            lat: 41.0,
            lon: -80.0,
            urbanized_population: 20_000,
        },
        County {
            code: "C".into(),
            lat: 35.0,
            lon: -90.0,
            urbanized_population: 0,
        },
    ];
    let membership: Vec<usize> = (0..300)
        .map(|a| {
            if a < 200 {
                0
            } else if a < 250 {
                1
            } else {
                2
            }
        })
        .collect();
    let assignment = CountyAssignment::new(counties, membership)?;
    #[rustfmt::skip]
    let sci = AffinityMatrix::new(3, vec![
        5.0, 1.0, 0.2,
        1.0, 8.0, 0.5,
        0.2, 0.5, 9.0,
    ])?;
    let g = generate_sci_network(&sci, &assignment, 3000, 1)?;
    let mut counts = [[0u32; 3]; 3];
    for e in g.edges() {
        counts[assignment.county_of(e.source)][assignment.county_of(e.target)] += 1;
    }
    for (i, row) in counts.iter().enumerate() {
        println!("{} -> {:?}", ["A", "B", "C"][i], row);
    }
    Ok(())
}
