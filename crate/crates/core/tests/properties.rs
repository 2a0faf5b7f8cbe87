mod common;

use proptest::prelude::*;
use wordspread::engine::{seed_simulation, Mode, Networks, SimulationConfig};
use wordspread::geostats::{
    getis_ord_smooth, lees_l, pathway_likelihood, principal_regions, zero_inflated_tau, PairClass,
    PathwayEntry, PathwayMatrix, SpatialDistribution, SpatialWeights,
};
use wordspread::identity::{enregister_word, word_similarities, CategorySchema, Population};
use wordspread::network::{compute_edge_weights, shuffle_network, AgentId, SocialGraph};
use wordspread::rng;

fn graph_strategy() -> impl Strategy<Value = SocialGraph> {
    (3usize..40, 0usize..300, any::<u64>())
        .prop_map(|(n, m, seed)| common::random_graph(n, m, seed))
}

fn matrix(taus: &[f64]) -> PathwayMatrix {
    PathwayMatrix {
        counties: vec![],
        entries: taus
            .iter()
            .enumerate()
            .map(|(i, &tau)| PathwayEntry {
                source: i,
                target: i + 1,
                tau,
                edge_count: 10,
                class: PairClass::UrbanUrban,
            })
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_keeps_every_degree(g in graph_strategy(), seed in any::<u64>()) {
        let s = shuffle_network(&g, seed).graph;
        for v in 0..g.node_count() as AgentId {
            prop_assert_eq!(g.in_degree(v), s.in_degree(v));
            prop_assert_eq!(g.out_degree(v), s.out_degree(v));
        }
        prop_assert!(s.edges().all(|e| e.source != e.target));
    }

    #[test]
    fn edge_weights_are_normalized(g in graph_strategy()) {
        let w = compute_edge_weights(&g).unwrap();
        for j in 0..w.node_count() as AgentId {
            let ws: Vec<f64> = w.in_edges(j).map(|e| e.weight).collect();
            if !ws.is_empty() {
                prop_assert!(ws.iter().all(|&x| x > 0.0 && x <= 1.0));
                prop_assert_eq!(ws.iter().copied().fold(0.0, f64::max), 1.0);
            }
        }
    }

    #[test]
    fn word_similarity_is_bounded(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 5), 4..40),
        k in 1usize..4,
        q in 0.05f64..0.95,
    ) {
        let pop = Population::new(CategorySchema::with_sizes(&[2, 3]).unwrap(), rows).unwrap();
        let adopters: Vec<&[f64]> = (0..k.min(pop.len())).map(|i| pop.row(i as AgentId)).collect();
        let word = enregister_word(&adopters, &pop, q).unwrap();
        prop_assert!(word.registers.iter().any(|&b| b));
        let sims = word_similarities(&pop, &word);
        prop_assert!(sims.iter().all(|&s| (0.0..=1.0).contains(&s)));
    }

    #[test]
    fn adoption_probabilities_stay_in_unit_interval(g in graph_strategy(), seed in any::<u64>(), s in 0.0f64..=1.0) {
        let n = g.node_count();
        let mut r = rng::sequential(seed, "rows");
        let rows = (0..n).map(|_| (0..3).map(|_| rand::Rng::random::<f64>(&mut r)).collect()).collect();
        let pop = Population::new(CategorySchema::with_sizes(&[3]).unwrap(), rows).unwrap();
        let networks = Networks::new(g, seed);
        for mode in Mode::ALL {
            let config = SimulationConfig { mode, stickiness: s, seed, ..Default::default() };
            let mut sim = seed_simulation(&[0, 1], &config, &networks, &pop).unwrap();
            for _ in 0..40 {
                sim.step().unwrap();
                let st = sim.state();
                prop_assert!(st.p.iter().all(|p| (0.0..=1.0).contains(p)));
                prop_assert!(st.current_adopters.iter().all(|&a| st.ever_exposed[a as usize]));
            }
        }
    }

    #[test]
    fn lees_l_symmetric_and_affine_invariant(
        x in prop::collection::vec(-5.0f64..5.0, 12),
        y in prop::collection::vec(-5.0f64..5.0, 12),
        a in 0.1f64..10.0,
        b in -10.0f64..10.0,
    ) {
        let centroids: Vec<(f64, f64)> = (0..12).map(|i| (30.0 + i as f64, -90.0 + (i * 7 % 5) as f64)).collect();
        let w = SpatialWeights::knn(&centroids, 4).unwrap();
        if let (Some(l1), Some(l2)) = (lees_l(&x, &y, &w), lees_l(&y, &x, &w)) {
            prop_assert!((l1 - l2).abs() < 1e-12);
            let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            prop_assert!((lees_l(&xs, &y, &w).unwrap() - l1).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_inflated_tau_bounded_and_symmetric(
        u in prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..3.0], 2..30),
        seed in any::<u64>(),
    ) {
        let mut r = rng::sequential(seed, "v");
        let v: Vec<f64> = u.iter().map(|_| if rand::Rng::random::<f64>(&mut r) < 0.3 { 0.0 } else { rand::Rng::random::<f64>(&mut r) }).collect();
        let t = zero_inflated_tau(&u, &v).unwrap();
        prop_assert!((-1.0..=1.0).contains(&t));
        prop_assert_eq!(t, zero_inflated_tau(&v, &u).unwrap());
    }

    #[test]
    fn self_likelihood_dominates(e in prop::collection::vec(-0.5f64..1.0, 2..50), noise in prop::collection::vec(-0.3f64..0.3, 50)) {
        let m: Vec<f64> = e.iter().zip(&noise).map(|(a, b)| a + b).collect();
        let (le, lm) = (pathway_likelihood(&matrix(&e), &matrix(&e)).unwrap(), pathway_likelihood(&matrix(&e), &matrix(&m)).unwrap());
        prop_assert!(lm <= le * (1.0 + 1e-12));
        prop_assert!(le > 0.0 && le <= 1.0);
    }

    #[test]
    fn getis_output_shift_invariant(x in prop::collection::vec(0.0f64..100.0, 10), c in -50.0f64..50.0) {
        let centroids: Vec<(f64, f64)> = (0..10).map(|i| (35.0, -100.0 + i as f64)).collect();
        let w = SpatialWeights::knn(&centroids, 3).unwrap();
        let dist = |v: Vec<f64>| SpatialDistribution { counties: (0..10).map(|i| i.to_string()).collect(), values: v, word: String::new(), source: String::new(), smoothed: false };
        let a = getis_ord_smooth(&dist(x.clone()), &w).unwrap();
        let b = getis_ord_smooth(&dist(x.iter().map(|v| v + c).collect()), &w).unwrap();
        for (p, q) in a.distribution.values.iter().zip(&b.distribution.values) {
            prop_assert!((p - q).abs() < 1e-6);
        }
    }

    #[test]
    fn pca_loadings_orthonormal(rows in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 8), 6..12)) {
        let pr = principal_regions(&rows, 5).unwrap();
        for a in 0..pr.loadings.len() {
            for b in 0..pr.loadings.len() {
                let dot: f64 = pr.loadings[a].iter().zip(&pr.loadings[b]).map(|(x, y)| x * y).sum();
                let expected = f64::from(u8::from(a == b));
                prop_assert!((dot - expected).abs() < 1e-9);
            }
        }
        prop_assert!(pr.explained_variance_ratio.windows(2).all(|w| w[0] >= w[1] - 1e-15));
    }

    #[test]
    fn counter_draws_in_unit_interval(seed in any::<u64>(), agent in any::<u64>(), t in any::<u64>()) {
        let u = rng::uniform(seed, agent, t);
        prop_assert!((0.0..1.0).contains(&u));
        prop_assert_eq!(u, rng::uniform(seed, agent, t));
    }
}

#[test]
fn getis_with_uniform_rows_has_zero_weighted_mean() {
    let n = 9;
    let w = SpatialWeights::from_neighbors((0..n).map(|_| (0..n).collect()).collect()).unwrap();
    let values: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64).collect();
    let d = SpatialDistribution {
        counties: (0..n).map(|i| i.to_string()).collect(),
        values,
        word: String::new(),
        source: String::new(),
        smoothed: false,
    };
    let s = getis_ord_smooth(&d, &w).unwrap();
    let mean: f64 = s.distribution.values.iter().sum::<f64>() / n as f64;
    assert!(mean.abs() < 1e-12);
}
