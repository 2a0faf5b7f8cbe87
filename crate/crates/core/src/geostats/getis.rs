use crate::error::{Error, Result};

use super::{SpatialDistribution, SpatialWeights};

#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed {
    pub distribution: SpatialDistribution,
    /// Set when the input had zero variance; every value is then 0.
    pub degenerate: bool,
}

/// Replaces each value by its local Getis-Ord `G*` z-score:
///
/// ```text
/// G*_i = (Σ_j w_ij x_j − x̄ W_i) / (s · sqrt((n S_i − W_i²) / (n − 1)))
/// ```
///
/// with `W_i = Σ_j w_ij`, `S_i = Σ_j w_ij²`, and `x̄`, `s` the global mean and
/// (population) standard deviation.
pub fn getis_ord_smooth(dist: &SpatialDistribution, weights: &SpatialWeights) -> Result<Smoothed> {
    let n = dist.values.len();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: weights.len(),
        });
    }
    let x = &dist.values;
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    let s = var.sqrt();
    let mut out = dist.clone();
    out.smoothed = true;
    if n < 2 || s.is_nan() || s <= 1e-12 * mean.abs().max(1.0) {
        out.values = vec![0.0; n];
        return Ok(Smoothed {
            distribution: out,
            degenerate: true,
        });
    }
    out.values = (0..n)
        .map(|i| {
            let row = weights.row(i);
            let w_sum: f64 = row.iter().map(|r| r.1).sum();
            let w_sq: f64 = row.iter().map(|r| r.1 * r.1).sum();
            let lag: f64 = row.iter().map(|&(j, w)| w * (x[j] - mean)).sum();
            let denom = s * ((nf * w_sq - w_sum * w_sum) / (nf - 1.0)).max(0.0).sqrt();
            if denom > 0.0 {
                // centred form of Σ w x − x̄ W
                lag / denom
            } else {
                0.0
            }
        })
        .collect();
    Ok(Smoothed {
        distribution: out,
        degenerate: false,
    })
}
