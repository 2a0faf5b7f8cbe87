use crate::error::{Error, Result};

const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Great-circle distance between two `(lat, lon)` points in degrees.
pub fn haversine_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (la1, lo1) = (a.0.to_radians(), a.1.to_radians());
    let (la2, lo2) = (b.0.to_radians(), b.1.to_radians());
    let h = ((la2 - la1) / 2.0).sin().powi(2)
        + la1.cos() * la2.cos() * ((lo2 - lo1) / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Sparse row-standardized spatial weights over a county universe.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialWeights {
    rows: Vec<Vec<(usize, f64)>>,
    pub self_included: bool,
}

impl SpatialWeights {
    /// Each county weighs itself plus its `k - 1` nearest counties by
    /// great-circle distance, `1/k` each. Distance ties break on index.
    /// `k` is capped at the number of counties.
    pub fn knn(centroids: &[(f64, f64)], k: usize) -> Result<Self> {
        let n = centroids.len();
        if n == 0 || k == 0 {
            return Err(Error::invalid(
                "k-nearest weights need at least one county and k >= 1",
            ));
        }
        let k = k.min(n);
        let rows = (0..n)
            .map(|i| {
                let mut d: Vec<(f64, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (haversine_km(centroids[i], centroids[j]), j))
                    .collect();
                d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let mut row: Vec<(usize, f64)> = std::iter::once(i)
                    .chain(d.into_iter().take(k - 1).map(|x| x.1))
                    .map(|j| (j, 1.0 / k as f64))
                    .collect();
                row.sort_by_key(|x| x.0);
                row
            })
            .collect();
        Ok(SpatialWeights {
            rows,
            self_included: true,
        })
    }

    /// Each county is its own sole neighbour.
    pub fn identity(n: usize) -> Self {
        SpatialWeights {
            rows: (0..n).map(|i| vec![(i, 1.0)]).collect(),
            self_included: true,
        }
    }

    /// Arbitrary neighbour lists, row-standardized here.
    pub fn from_neighbors(neighbors: Vec<Vec<usize>>) -> Result<Self> {
        let n = neighbors.len();
        let mut self_included = true;
        let rows = neighbors
            .into_iter()
            .enumerate()
            .map(|(i, mut nb)| {
                nb.sort_unstable();
                nb.dedup();
                if nb.is_empty() || nb.iter().any(|&j| j >= n) {
                    return Err(Error::invalid(format!(
                        "county {i} has an empty or out-of-range neighbour list"
                    )));
                }
                self_included &= nb.contains(&i);
                let w = 1.0 / nb.len() as f64;
                Ok(nb.into_iter().map(|j| (j, w)).collect())
            })
            .collect::<Result<_>>()?;
        Ok(SpatialWeights {
            rows,
            self_included,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// `Σ_j w_ij x_j` for every `i`.
    pub fn lag(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, w)| w * x[j]).sum())
            .collect()
    }
}
