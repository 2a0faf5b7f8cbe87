//! Which identity registers a word picks up from its first adopters, and how
//! close each agent's identity is to it.

use wordspread::identity::{enregister_word, word_similarities, CategorySchema, Population};
use wordspread::rng;

fn main() -> wordspread::Result<()> {
    use rand::Rng;
    let schema = CategorySchema::with_sizes(&[2, 3])?;
    let mut r = rng::sequential(3, "example");
    let rows: Vec<Vec<f64>> = (0..500)
        .map(|_| (0..5).map(|_| r.random::<f64>()).collect())
        .collect();
    let pop = Population::new(schema, rows)?;

    // adopters who score high on register 3
    let adopters: Vec<Vec<f64>> = (0..10)
        .map(|i| vec![0.5, 0.4, 0.3, 0.9 + 0.01 * i as f64, 0.2])
        .collect();
    let refs: Vec<&[f64]> = adopters.iter().map(Vec::as_slice).collect();
    for q in [0.75, 0.95, 0.999] {
        let w = enregister_word(&refs, &pop, q)?;
        let sims = word_similarities(&pop, &w);
        let mean = sims.iter().sum::<f64>() / sims.len() as f64;
        println!(
            "Q={q}: registers {:?} threshold {:.3} quantiles {:.2?} mean similarity {mean:.3}",
            w.registers, w.threshold_used, w.quantiles
        );
    }
    Ok(())
}
