use std::collections::HashMap;

use crate::error::{Error, Result};

use super::{PairClass, PathwayMatrix};

/// Pathway strengths are floored here before normalization.
pub const TAU_FLOOR: f64 = 1e-6;

/// Likelihood of the empirical pathways under a model's pathways, in the
/// large-sample limit: `exp(Σ q_E log q_M)`, where `q` is the floored,
/// sum-normalized strength over the pairs both matrices contain.
pub fn pathway_likelihood(empirical: &PathwayMatrix, model: &PathwayMatrix) -> Result<f64> {
    pathway_likelihood_where(empirical, model, |_| true)
}

/// [`pathway_likelihood`] restricted to pairs of the classes `keep` accepts.
pub fn pathway_likelihood_where(
    empirical: &PathwayMatrix,
    model: &PathwayMatrix,
    keep: impl Fn(PairClass) -> bool,
) -> Result<f64> {
    let model_tau: HashMap<(usize, usize), f64> = model
        .entries
        .iter()
        .map(|e| ((e.source, e.target), e.tau))
        .collect();
    let mut te = Vec::new();
    let mut tm = Vec::new();
    for e in empirical.entries.iter().filter(|e| keep(e.class)) {
        if let Some(&m) = model_tau.get(&(e.source, e.target)) {
            te.push(e.tau.max(TAU_FLOOR));
            tm.push(m.max(TAU_FLOOR));
        }
    }
    if te.is_empty() {
        return Err(Error::invalid("no pathways shared by the two matrices"));
    }
    let se: f64 = te.iter().sum();
    let sm: f64 = tm.iter().sum();
    let cross: f64 = te
        .iter()
        .zip(&tm)
        .map(|(e, m)| (e / se) * (m / sm).ln())
        .sum();
    Ok(cross.exp())
}
