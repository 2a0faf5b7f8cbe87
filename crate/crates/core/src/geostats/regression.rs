use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

use super::{mean, PairClass, PathwayMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    /// Percentile bootstrap interval, when requested.
    pub ci95: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub coefficients: Vec<Coefficient>,
    pub r_squared: f64,
    pub observations: usize,
}

impl OlsFit {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.coefficients
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.estimate)
    }
}

fn rank(x: &DMatrix<f64>) -> usize {
    if x.ncols() == 0 {
        return 0;
    }
    let sv = x.clone().svd(false, false).singular_values;
    let top = sv.max();
    let tol = top * (x.nrows().max(x.ncols()) as f64) * f64::EPSILON * 1e3;
    sv.iter().filter(|&&s| s > tol).count()
}

fn dependent_columns(names: &[String], x: &DMatrix<f64>) -> Vec<String> {
    let mut out = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    for (c, name) in names.iter().enumerate().take(x.ncols()) {
        let mut trial = kept.clone();
        trial.push(c);
        if rank(&x.select_columns(&trial)) == trial.len() {
            kept = trial;
        } else {
            out.push(name.clone());
        }
    }
    out
}

/// Ordinary least squares with classical standard errors. Fails with the
/// names of linearly dependent columns when the design is rank deficient.
pub fn ols(names: &[String], x: &DMatrix<f64>, y: &[f64]) -> Result<OlsFit> {
    let (n, p) = x.shape();
    if names.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            actual: names.len(),
        });
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: y.len(),
        });
    }
    if n <= p {
        return Err(Error::invalid(format!(
            "{n} observations cannot identify {p} coefficients"
        )));
    }
    if rank(x) < p {
        return Err(Error::RankDeficient(dependent_columns(names, x)));
    }
    let yv = DVector::from_column_slice(y);
    let svd = x.clone().svd(true, true);
    let beta = svd
        .solve(&yv, 1e-12)
        .map_err(|e| Error::Internal(e.to_string()))?;
    let resid = &yv - x * &beta;
    let rss = resid.norm_squared();
    let my = mean(y);
    let tss: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sigma2 = rss / (n - p) as f64;
    // (XᵀX)⁻¹ = V Σ⁻² Vᵀ
    let v = svd.v_t.as_ref().unwrap().transpose();
    let inv_s2 = svd.singular_values.map(|s| 1.0 / (s * s));
    let cov = &v * DMatrix::from_diagonal(&inv_s2) * v.transpose();
    let coefficients = (0..p)
        .map(|c| Coefficient {
            name: names[c].clone(),
            estimate: beta[c],
            std_error: (sigma2 * cov[(c, c)]).max(0.0).sqrt(),
            ci95: None,
        })
        .collect();
    Ok(OlsFit {
        coefficients,
        r_squared: if tss > 0.0 { 1.0 - rss / tss } else { 1.0 },
        observations: n,
    })
}

fn zscore(x: &[f64]) -> Vec<f64> {
    let m = mean(x);
    let sd = (x.iter().map(|v| (v - m).powi(2)).sum::<f64>()
        / (x.len().saturating_sub(1).max(1)) as f64)
        .sqrt();
    if sd == 0.0 {
        return vec![0.0; x.len()];
    }
    x.iter().map(|v| (v - m) / sd).collect()
}

/// Regression of a dependent pathway matrix on the network-only and
/// identity-only pathways, interacted with pathway type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTable {
    pub fit: OlsFit,
    /// Type columns left out because no pair of that type is present.
    pub dropped: Vec<String>,
    pub bootstrap_resamples: usize,
}

/// Design: intercept, `rural`, `urban` (urban-rural is the reference), `tau_n`,
/// `tau_n:rural`, `tau_n:urban`, `tau_i`, `tau_i:rural`, `tau_i:urban`,
/// `tau_n:tau_i`, `tau_n:tau_i:rural`, `tau_n:tau_i:urban`. The dependent
/// variable and both regressors are z-standardized over the shared pairs;
/// interactions are products of the standardized values.
///
/// With `bootstrap = Some((resamples, seed))`, each coefficient also gets a
/// 95% percentile interval from resampling pairs with replacement.
pub fn pathway_regression(
    dependent: &PathwayMatrix,
    network_only: &PathwayMatrix,
    identity_only: &PathwayMatrix,
    bootstrap: Option<(usize, u64)>,
) -> Result<RegressionTable> {
    let index = |m: &PathwayMatrix| -> HashMap<(usize, usize), f64> {
        m.entries
            .iter()
            .map(|e| ((e.source, e.target), e.tau))
            .collect()
    };
    let (tn, ti) = (index(network_only), index(identity_only));
    let mut y = Vec::new();
    let mut xn = Vec::new();
    let mut xi = Vec::new();
    let mut class = Vec::new();
    for e in &dependent.entries {
        if let (Some(&a), Some(&b)) = (tn.get(&(e.source, e.target)), ti.get(&(e.source, e.target)))
        {
            y.push(e.tau);
            xn.push(a);
            xi.push(b);
            class.push(e.class);
        }
    }
    if y.is_empty() {
        return Err(Error::invalid("no pathways shared by the three matrices"));
    }
    let (zy, zn, zi) = (zscore(&y), zscore(&xn), zscore(&xi));
    let rural: Vec<f64> = class
        .iter()
        .map(|&c| f64::from(u8::from(c == PairClass::RuralRural)))
        .collect();
    let urban: Vec<f64> = class
        .iter()
        .map(|&c| f64::from(u8::from(c == PairClass::UrbanUrban)))
        .collect();
    let nxi: Vec<f64> = zn.iter().zip(&zi).map(|(a, b)| a * b).collect();
    let times =
        |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p * q).collect() };

    let columns: Vec<(&str, Vec<f64>, bool)> = vec![
        ("intercept", vec![1.0; y.len()], false),
        ("rural", rural.clone(), true),
        ("urban", urban.clone(), true),
        ("tau_n", zn.clone(), false),
        ("tau_n:rural", times(&zn, &rural), true),
        ("tau_n:urban", times(&zn, &urban), true),
        ("tau_i", zi.clone(), false),
        ("tau_i:rural", times(&zi, &rural), true),
        ("tau_i:urban", times(&zi, &urban), true),
        ("tau_n:tau_i", nxi.clone(), false),
        ("tau_n:tau_i:rural", times(&nxi, &rural), true),
        ("tau_n:tau_i:urban", times(&nxi, &urban), true),
    ];
    let has_rural = rural.iter().any(|&v| v != 0.0);
    let has_urban = urban.iter().any(|&v| v != 0.0);
    let mut dropped = Vec::new();
    let mut names = Vec::new();
    let mut kept = Vec::new();
    for (name, col, typed) in columns {
        let absent = typed
            && ((name.ends_with("rural") && !has_rural) || (name.ends_with("urban") && !has_urban));
        if absent {
            dropped.push(name.to_string());
        } else {
            names.push(name.to_string());
            kept.push(col);
        }
    }
    let design = |rows: &[usize]| DMatrix::from_fn(rows.len(), kept.len(), |r, c| kept[c][rows[r]]);
    let all: Vec<usize> = (0..y.len()).collect();
    let mut fit = ols(&names, &design(&all), &zy)?;

    let mut resamples = 0;
    if let Some((count, seed)) = bootstrap {
        let mut r = rng::sequential(seed, "regression-bootstrap");
        let mut draws: Vec<Vec<f64>> = vec![Vec::with_capacity(count); names.len()];
        for _ in 0..count {
            let rows: Vec<usize> = (0..y.len()).map(|_| r.random_range(0..y.len())).collect();
            let yb: Vec<f64> = rows.iter().map(|&i| zy[i]).collect();
            if let Ok(b) = ols(&names, &design(&rows), &yb) {
                resamples += 1;
                for (d, c) in draws.iter_mut().zip(&b.coefficients) {
                    d.push(c.estimate);
                }
            }
        }
        if resamples > 0 {
            for (c, d) in fit.coefficients.iter_mut().zip(draws.iter_mut()) {
                d.sort_by(f64::total_cmp);
                c.ci95 = Some((percentile(d, 0.025), percentile(d, 0.975)));
            }
        }
    }
    Ok(RegressionTable {
        fit,
        dropped,
        bootstrap_resamples: resamples,
    })
}

/// Linear-interpolated percentile of an ascending slice.
pub(crate) fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
