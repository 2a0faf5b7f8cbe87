//! County-level measurement: aggregation, smoothing, spatial correlation,
//! spatiotemporal pathways and their likelihood, urban/rural classes,
//! pathway regressions, and principal regions.

mod aggregate;
mod getis;
mod lee;
mod likelihood;
mod pathways;
mod pca;
mod regression;
mod tau;
mod urban;
mod weights;

pub use aggregate::{aggregate, Aggregation, SpatialDistribution};
pub use getis::{getis_ord_smooth, Smoothed};
pub use lee::{classify_similarity, lees_l, pearson, Similarity, BROADLY_SIMILAR, VERY_SIMILAR};
pub use likelihood::{pathway_likelihood, pathway_likelihood_where, TAU_FLOOR};
pub use pathways::{
    build_pathways, county_edge_counts, PathwayEntry, PathwayMatrix, SpatialTimeSeries, WordSeries,
};
pub use pca::{principal_regions, PrincipalRegions};
pub(crate) use regression::percentile;
pub use regression::{ols, pathway_regression, Coefficient, OlsFit, RegressionTable};
pub use tau::{kendall_tau_b, zero_inflated_tau};
pub use urban::{classify_county, PairClass, Urbanicity, URBAN_THRESHOLD};
pub use weights::{haversine_km, SpatialWeights};

/// Arithmetic mean; 0 for an empty slice.
pub(crate) fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().sum::<f64>() / x.len() as f64
    }
}
