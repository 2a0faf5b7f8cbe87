use serde::{Deserialize, Serialize};

use super::{mean, SpatialWeights};

pub const VERY_SIMILAR: f64 = 0.4;
pub const BROADLY_SIMILAR: f64 = 0.13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Similarity {
    VerySimilar,
    BroadlySimilar,
    NotSimilar,
}

/// Both boundaries are inclusive.
pub fn classify_similarity(l: f64) -> Similarity {
    if l >= VERY_SIMILAR {
        Similarity::VerySimilar
    } else if l >= BROADLY_SIMILAR {
        Similarity::BroadlySimilar
    } else {
        Similarity::NotSimilar
    }
}

/// Pearson's correlation; `None` when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// Lee's bivariate spatial association `L`:
///
/// ```text
/// L = n / Σ_i (Σ_j v_ij)² · Σ_i (Σ_j v_ij (x_j − x̄))(Σ_j v_ij (y_j − ȳ))
///     / (sqrt(Σ (x_i − x̄)²) · sqrt(Σ (y_i − ȳ)²))
/// ```
///
/// `None` when either map has zero variance.
pub fn lees_l(x: &[f64], y: &[f64], weights: &SpatialWeights) -> Option<f64> {
    let n = x.len();
    assert_eq!(n, y.len());
    assert_eq!(n, weights.len());
    let (mx, my) = (mean(x), mean(y));
    let dx: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let dy: Vec<f64> = y.iter().map(|v| v - my).collect();
    let sxx: f64 = dx.iter().map(|v| v * v).sum();
    let syy: f64 = dy.iter().map(|v| v * v).sum();
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    let lx = weights.lag(&dx);
    let ly = weights.lag(&dy);
    let row_sq: f64 = (0..n)
        .map(|i| weights.row(i).iter().map(|r| r.1).sum::<f64>().powi(2))
        .sum();
    let cross: f64 = lx.iter().zip(&ly).map(|(a, b)| a * b).sum();
    Some(n as f64 / row_sq * cross / (sxx.sqrt() * syy.sqrt()))
}
