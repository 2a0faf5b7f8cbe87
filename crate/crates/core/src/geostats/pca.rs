use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalRegions {
    /// `loadings[c][county]`, unit length, largest-magnitude entry positive.
    pub loadings: Vec<Vec<f64>>,
    pub explained_variance_ratio: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Principal components of a word-by-county matrix (`rows[word][county]`),
/// centred per county, via singular value decomposition.
pub fn principal_regions(rows: &[Vec<f64>], k: usize) -> Result<PrincipalRegions> {
    let words = rows.len();
    if words == 0 || k == 0 {
        return Err(Error::invalid("need at least one word and one component"));
    }
    let counties = rows[0].len();
    if let Some(r) = rows.iter().find(|r| r.len() != counties) {
        return Err(Error::DimensionMismatch {
            expected: counties,
            actual: r.len(),
        });
    }
    let mut warnings = Vec::new();
    if words < k {
        warnings.push(format!("{words} words cannot support {k} components"));
    }
    let mut x = DMatrix::from_fn(words, counties, |w, c| rows[w][c]);
    for c in 0..counties {
        let m = x.column(c).mean();
        x.column_mut(c).add_scalar_mut(-m);
    }
    let svd = x.svd(false, true);
    let sv = &svd.singular_values;
    let v_t = svd.v_t.as_ref().unwrap();
    let total: f64 = sv.iter().map(|s| s * s).sum();
    let tol = sv.max() * (words.max(counties) as f64) * f64::EPSILON * 1e3;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let rank = order.iter().filter(|&&i| sv[i] > tol).count();
    if k > rank {
        warnings.push(format!(
            "requested {k} components but the centred matrix has rank {rank}; truncated"
        ));
        log::warn!("{}", warnings.last().unwrap());
    }
    let keep = k.min(rank);
    let mut loadings = Vec::with_capacity(keep);
    let mut ratio = Vec::with_capacity(keep);
    for &i in order.iter().take(keep) {
        let mut row: Vec<f64> = v_t.row(i).iter().copied().collect();
        let big = row
            .iter()
            .copied()
            .fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
        if big < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
        loadings.push(row);
        ratio.push(if total > 0.0 {
            sv[i] * sv[i] / total
        } else {
            0.0
        });
    }
    Ok(PrincipalRegions {
        loadings,
        explained_variance_ratio: ratio,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rank_one_matrix_has_one_component() {
        let base = [0.1, 0.9, 0.3, 0.0, 0.5, 0.2];
        let rows: Vec<Vec<f64>> = (1..=6)
            .map(|s| base.iter().map(|v| v * s as f64).collect())
            .collect();
        let pr = principal_regions(&rows, 5).unwrap();
        assert_eq!(pr.loadings.len(), 1);
        assert_abs_diff_eq!(pr.explained_variance_ratio[0], 1.0, epsilon = 1e-12);
        assert!(!pr.warnings.is_empty());
    }

    #[test]
    fn loadings_are_orthonormal_and_ratios_nonincreasing() {
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|w| {
                (0..20)
                    .map(|c| (((w * 7 + c * 3) % 11) as f64).sqrt() + (w * c % 5) as f64)
                    .collect()
            })
            .collect();
        let pr = principal_regions(&rows, 5).unwrap();
        assert_eq!(pr.loadings.len(), 5);
        for a in 0..5 {
            for b in 0..5 {
                let dot: f64 = pr.loadings[a]
                    .iter()
                    .zip(&pr.loadings[b])
                    .map(|(x, y)| x * y)
                    .sum();
                assert_abs_diff_eq!(dot, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-9);
            }
            let big =
                pr.loadings[a]
                    .iter()
                    .copied()
                    .fold(0.0f64, |x, y| if y.abs() > x.abs() { y } else { x });
            assert!(big > 0.0);
        }
        assert!(pr.explained_variance_ratio.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(principal_regions(&[vec![1.0, 2.0], vec![1.0]], 1).is_err());
    }
}
