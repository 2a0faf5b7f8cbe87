use wordspread::geostats::{pathway_regression, PairClass, PathwayEntry, PathwayMatrix};
use wordspread::rng;

/// Explains one set of pathway strengths by two others, interacted with the
/// urban/rural type of each pathway.
fn main() -> wordspread::Result<()> {
    use rand::Rng;
    let mut r = rng::sequential(4, "example");
    let n = 400;
    let classes: Vec<PairClass> = (0..n)
        .map(|_| PairClass::ALL[r.random_range(0..3)])
        .collect();
    let tau_n: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
    let tau_i: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
    // network matters everywhere, identity mostly between rural counties
    let dep: Vec<f64> = (0..n)
        .map(|p| {
            let id = if classes[p] == PairClass::RuralRural {
                0.8
            } else {
                0.1
            };
            0.5 * tau_n[p] + id * tau_i[p] + 0.05 * r.random::<f64>()
        })
        .collect();
    let m = |t: &[f64]| PathwayMatrix {
        counties: vec![],
        entries: t
            .iter()
            .enumerate()
            .map(|(p, &tau)| PathwayEntry {
                source: p,
                target: p + 1,
                tau,
                edge_count: 10,
                class: classes[p],
            })
            .collect(),
    };
    let table = pathway_regression(&m(&dep), &m(&tau_n), &m(&tau_i), Some((500, 1)))?;
    println!(
        "R² = {:.3} on {} pathways",
        table.fit.r_squared, table.fit.observations
    );
    for c in &table.fit.coefficients {
        let ci = c
            .ci95
            .map_or(String::new(), |(lo, hi)| format!("[{lo:+.3}, {hi:+.3}]"));
        println!("{:20} {:+.3} ± {:.3} {ci}", c.name, c.estimate, c.std_error);
    }
    Ok(())
}
