use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{CategorySchema, Population};

/// Category-level and register-level weights derived from a word's registers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryWeights {
    pub category: Vec<f64>,
    pub register: Vec<f64>,
    /// False when no register is set; every weight is then zero.
    pub active: bool,
}

/// The identity a word signals, fixed from its initial adopters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordIdentity {
    pub registers: Vec<bool>,
    pub category_weights: Vec<f64>,
    pub register_weights: Vec<f64>,
    /// `Q`, or the lowered fallback threshold when `Q` activated nothing.
    pub threshold_used: f64,
    /// Population quantile of the adopters' median, per register.
    pub quantiles: Vec<f64>,
}

impl WordIdentity {
    /// A word that signals nothing; similarity to it is identically 1.
    pub fn neutral(schema: &CategorySchema) -> Self {
        let d = schema.dimension();
        WordIdentity {
            registers: vec![false; d],
            category_weights: vec![0.0; schema.category_count()],
            register_weights: vec![0.0; d],
            threshold_used: 1.0,
            quantiles: vec![0.0; d],
        }
    }

    pub fn is_neutral(&self) -> bool {
        self.register_weights.iter().all(|&w| w == 0.0)
    }

    /// `Υ_w` as reals (0 or 1).
    pub fn anchor(&self) -> Vec<f64> {
        self.registers
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect()
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Empirical-CDF position of `x` in an ascending slice, ties at midpoint rank:
/// `(#{v < x} + #{v = x} / 2) / n`.
pub fn quantile_in(sorted: &[f64], x: f64) -> f64 {
    let below = sorted.partition_point(|&v| v < x);
    let upto = sorted.partition_point(|&v| v <= x);
    (below as f64 + 0.5 * (upto - below) as f64) / sorted.len() as f64
}

/// Category weights `1 / |active categories|` for each category holding a set
/// register; the register-level expansion divides by the category size.
pub fn category_weights(registers: &[bool], schema: &CategorySchema) -> CategoryWeights {
    let active: Vec<bool> = (0..schema.category_count())
        .map(|k| schema.span(k).any(|m| registers[m]))
        .collect();
    let n_active = active.iter().filter(|&&a| a).count();
    if n_active == 0 {
        return CategoryWeights {
            category: vec![0.0; schema.category_count()],
            register: vec![0.0; schema.dimension()],
            active: false,
        };
    }
    let category: Vec<f64> = active
        .iter()
        .map(|&a| if a { 1.0 / n_active as f64 } else { 0.0 })
        .collect();
    let mut register = vec![0.0; schema.dimension()];
    for (k, &c) in category.iter().enumerate() {
        let span = schema.span(k);
        let w = c / span.len() as f64;
        register[span].fill(w);
    }
    CategoryWeights {
        category,
        register,
        active: true,
    }
}

/// Sets register `m` when the adopters' median on `m` sits above quantile `q`
/// of the population. If nothing clears `q`, the threshold drops to the
/// highest quantile reached, activating exactly the register(s) attaining it.
pub fn enregister_word(
    adopters: &[&[f64]],
    population: &Population,
    q: f64,
) -> Result<WordIdentity> {
    if adopters.is_empty() {
        return Err(Error::invalid("enregisterment needs at least one adopter"));
    }
    if population.is_empty() {
        return Err(Error::invalid("enregisterment needs a nonempty population"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("threshold Q = {q} outside (0,1)")));
    }
    let d = population.dimension();
    if let Some(a) = adopters.iter().find(|a| a.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: a.len(),
        });
    }

    let mut column = Vec::with_capacity(adopters.len());
    let quantiles: Vec<f64> = (0..d)
        .map(|m| {
            column.clear();
            column.extend(adopters.iter().map(|a| a[m]));
            quantile_in(population.sorted_column(m), median(&mut column))
        })
        .collect();

    let mut registers: Vec<bool> = quantiles.iter().map(|&x| x > q).collect();
    let mut threshold_used = q;
    if !registers.iter().any(|&b| b) {
        let top = quantiles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        registers = quantiles.iter().map(|&x| x >= top).collect();
        threshold_used = top;
    }
    let weights = category_weights(&registers, population.schema());
    Ok(WordIdentity {
        registers,
        category_weights: weights.category,
        register_weights: weights.register,
        threshold_used,
        quantiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn midpoint_quantile() {
        let col: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        assert_abs_diff_eq!(quantile_in(&col, 0.9), 0.905, epsilon = 1e-12);
        assert_eq!(quantile_in(&[1.0, 1.0, 1.0], 1.0), 0.5);
        assert_eq!(quantile_in(&[0.1, 0.2], 0.5), 1.0);
        assert_eq!(quantile_in(&[0.1, 0.2], 0.0), 0.0);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn one_active_category() {
        let s = CategorySchema::with_sizes(&[2, 3]).unwrap();
        let w = category_weights(&[false, false, true, false, false], &s);
        assert_eq!(w.category, vec![0.0, 1.0]);
        assert_eq!(w.register, vec![0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
    }

    #[test]
    fn three_active_categories_split_evenly() {
        let s = CategorySchema::with_sizes(&[1, 1, 1, 1]).unwrap();
        let w = category_weights(&[true, true, false, true], &s);
        assert_eq!(w.category, vec![1.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0]);
    }

    #[test]
    fn race_registers_share_half_over_six() {
        // geography(2), race(6)
        let s = CategorySchema::with_sizes(&[2, 6]).unwrap();
        let mut regs = vec![false; 8];
        regs[0] = true;
        regs[4] = true;
        let w = category_weights(&regs, &s);
        for m in 2..8 {
            assert_abs_diff_eq!(w.register[m], 0.5 / 6.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(w.register.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn no_registers_flags_inactive() {
        let s = CategorySchema::with_sizes(&[2]).unwrap();
        let w = category_weights(&[false, false], &s);
        assert!(!w.active);
        assert!(w.register.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn adopters_at_population_max_set_that_register() {
        let s = CategorySchema::with_sizes(&[1, 1]).unwrap();
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 20.0, 0.5]).collect();
        let pop = Population::new(s, rows).unwrap();
        let top = [0.95, 0.5];
        let adopters = vec![&top[..]; 10];
        let w = enregister_word(&adopters, &pop, 0.75).unwrap();
        assert_eq!(w.registers, vec![true, false]);
        assert_eq!(w.category_weights, vec![1.0, 0.0]);
        assert_eq!(w.threshold_used, 0.75);
    }

    #[test]
    fn median_adopters_trigger_fallback() {
        let s = CategorySchema::with_sizes(&[3]).unwrap();
        let rows: Vec<Vec<f64>> = (0..11)
            .map(|i| vec![i as f64 / 10.0, (10 - i) as f64 / 10.0, 0.5])
            .collect();
        let pop = Population::new(s, rows).unwrap();
        let mid = [0.5, 0.5, 0.5];
        let w = enregister_word(&[&mid[..]], &pop, 0.75).unwrap();
        // dims 0,1 sit at 0.5; dim 2 is all ties, also 0.5
        assert_eq!(w.registers, vec![true, true, true]);
        assert_eq!(w.threshold_used, 0.5);

        let off = [0.6, 0.5, 0.5];
        let w = enregister_word(&[&off[..]], &pop, 0.75).unwrap();
        assert_eq!(w.registers, vec![true, false, false]);
        assert!(w.threshold_used < 0.75);
    }

    #[test]
    fn hundred_step_population() {
        let s = CategorySchema::with_sizes(&[1]).unwrap();
        let rows: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64 / 100.0]).collect();
        let pop = Population::new(s, rows).unwrap();
        let a = [0.85];
        let b = [0.90];
        let c = [0.95];
        let w = enregister_word(&[&a[..], &b[..], &c[..]], &pop, 0.75).unwrap();
        assert!(w.registers[0]);
        assert_abs_diff_eq!(w.quantiles[0], 0.905, epsilon = 1e-12);
    }

    #[test]
    fn errors() {
        let s = CategorySchema::with_sizes(&[2]).unwrap();
        let pop = Population::new(s, vec![vec![0.1, 0.2]]).unwrap();
        assert!(enregister_word(&[], &pop, 0.75).is_err());
        assert!(enregister_word(&[&[0.1][..]], &pop, 0.75).is_err());
        assert!(enregister_word(&[&[0.1, 0.1][..]], &pop, 1.0).is_err());
    }
}
