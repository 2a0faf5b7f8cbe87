mod common;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use wordspread::engine::{seed_simulation, Mode, Networks, SimulationConfig};
use wordspread::geostats::{
    pathway_regression, principal_regions, zero_inflated_tau, PairClass, PathwayEntry,
    PathwayMatrix,
};
use wordspread::identity::{CategorySchema, Population};
use wordspread::network::{
    generate_sci_network, AffinityMatrix, AgentId, County, CountyAssignment, SocialGraph,
};
use wordspread::rng;

/// Upper 0.001 tail of chi-square with 2 degrees of freedom: -2 ln 0.001.
const CHI2_DF2_999: f64 = 13.815_510_557_964_274;

#[test]
fn sci_edges_follow_affinity_ratio() {
    let counties: Vec<County> = (0..3)
        .map(|i| County {
            code: format!("c{i}"),
            lat: 0.0,
            lon: i as f64,
            urbanized_population: 0,
        })
        .collect();
    let assignment: Vec<usize> = (0..60).map(|a| a / 20).collect();
    let counties = CountyAssignment::new(counties, assignment).unwrap();
    let sci = AffinityMatrix::new(3, vec![0.0, 2.0, 1.0, 2.0, 0.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
    let mut observed = [0.0f64; 3];
    for seed in 0..1000 {
        let g = generate_sci_network(&sci, &counties, 30, seed).unwrap();
        for e in g.edges() {
            let (a, b) = (counties.county_of(e.source), counties.county_of(e.target));
            let pair = match (a.min(b), a.max(b)) {
                (0, 1) => 0,
                (0, 2) => 1,
                (1, 2) => 2,
                p => panic!("edge inside a county: {p:?}"),
            };
            observed[pair] += 1.0;
        }
    }
    let total: f64 = observed.iter().sum();
    let expected = [0.5 * total, 0.25 * total, 0.25 * total];
    let chi2: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum();
    assert!(chi2 < CHI2_DF2_999, "chi2 = {chi2}, counts {observed:?}");
}

#[test]
fn first_iteration_adoption_rate_matches_stickiness() {
    // every target hears from every seed and from nobody else
    let (n_seeds, n_targets) = (5u32, 200u32);
    let n = (n_seeds + n_targets) as usize;
    let edges: Vec<(AgentId, AgentId, u32, f64)> = (0..n_seeds)
        .flat_map(|s| (n_seeds..n as u32).map(move |t| (s, t, 1, 1.0)))
        .collect();
    let graph = SocialGraph::from_weighted(n, edges).unwrap();
    let pop = Population::uniform(CategorySchema::with_sizes(&[2]).unwrap(), n, 0.5).unwrap();
    let networks = Networks::from_parts(graph.clone(), graph);
    let seeds: Vec<AgentId> = (0..n_seeds).collect();
    let s = 0.37;
    let runs = 500;
    let mut adopted = 0usize;
    for k in 0..runs {
        let config = SimulationConfig {
            mode: Mode::NetworkOnly,
            stickiness: s,
            seed: k,
            ..Default::default()
        };
        let mut sim = seed_simulation(&seeds, &config, &networks, &pop).unwrap();
        sim.step().unwrap();
        adopted += sim
            .state()
            .current_adopters
            .iter()
            .filter(|&&a| a >= n_seeds)
            .count();
    }
    let trials = (runs * n_targets as u64) as f64;
    let rate = adopted as f64 / trials;
    let se = (s * (1.0 - s) / trials).sqrt();
    assert!((rate - s).abs() < 3.0 * se, "rate {rate} vs {s} (se {se})");
}

#[test]
fn independent_noise_has_no_pathway_strength() {
    let n = 200;
    let bound = 3.0 / (n as f64).sqrt();
    for seed in 0..100 {
        let mut r = rng::sequential(seed, "noise");
        let mut draw = || -> Vec<f64> {
            (0..n)
                .map(|_| {
                    if r.random::<f64>() < 0.4 {
                        0.0
                    } else {
                        r.random::<f64>()
                    }
                })
                .collect()
        };
        let (u, v) = (draw(), draw());
        let tau = zero_inflated_tau(&u, &v).unwrap();
        assert!(tau.abs() < bound, "seed {seed}: tau {tau}");
    }
}

fn matrix(taus: &[f64], classes: &[PairClass]) -> PathwayMatrix {
    PathwayMatrix {
        counties: vec![],
        entries: taus
            .iter()
            .zip(classes)
            .enumerate()
            .map(|(i, (&tau, &class))| PathwayEntry {
                source: i,
                target: i + 1,
                tau,
                edge_count: 10,
                class,
            })
            .collect(),
    }
}

#[test]
fn pure_noise_regression_explains_nothing() {
    let n = 3000;
    let mut r = rng::sequential(5, "regression-noise");
    let normal = Normal::new(0.0, 1.0).unwrap();
    let classes: Vec<PairClass> = (0..n)
        .map(|_| PairClass::ALL[r.random_range(0..3)])
        .collect();
    let mut draw = || -> Vec<f64> { (0..n).map(|_| normal.sample(&mut r)).collect() };
    let (dep, net, ide) = (draw(), draw(), draw());
    let t = pathway_regression(
        &matrix(&dep, &classes),
        &matrix(&net, &classes),
        &matrix(&ide, &classes),
        None,
    )
    .unwrap();
    // 11 noise regressors on 3000 rows: E[R²] = 11/2999
    assert!(t.fit.r_squared < 0.015, "R² = {}", t.fit.r_squared);
    assert!(t.dropped.is_empty());
}

#[test]
fn two_orthogonal_regions_are_recovered() {
    let (a, b) = (0..20, 20..40);
    let alpha = [3.0, -3.0, 3.0, -3.0, 3.0, -3.0, 3.0, -3.0];
    let beta = [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0];
    let rows: Vec<Vec<f64>> = alpha
        .iter()
        .zip(&beta)
        .map(|(&x, &y)| {
            (0..40)
                .map(|c| if a.contains(&c) { x } else { y })
                .collect()
        })
        .collect();
    let pr = principal_regions(&rows, 2).unwrap();
    let indicator = |range: std::ops::Range<usize>| -> Vec<f64> {
        (0..40)
            .map(|c| {
                if range.contains(&c) {
                    1.0 / 20f64.sqrt()
                } else {
                    0.0
                }
            })
            .collect()
    };
    let cos = |l: &[f64], v: &[f64]| l.iter().zip(v).map(|(x, y)| x * y).sum::<f64>().abs();
    assert!((cos(&pr.loadings[0], &indicator(a)) - 1.0).abs() < 1e-9);
    assert!((cos(&pr.loadings[1], &indicator(b)) - 1.0).abs() < 1e-9);
    // per-word variances 9 and 1 over 20 counties each
    assert!((pr.explained_variance_ratio[0] - 0.9).abs() < 1e-9);
    assert!((pr.explained_variance_ratio[1] - 0.1).abs() < 1e-9);
}
