use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::Rng;
use rand_distr::{Normal, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geostats::{haversine_km, URBAN_THRESHOLD};
use crate::identity::{CategorySchema, Population};
use crate::network::{compute_edge_weights, AgentId, County, CountyAssignment, SocialGraph};
use crate::rng;

use super::world::{IdTable, WordSeed, WorldBundle};

/// Parameters of a synthetic world.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n_agents: usize,
    pub n_counties: usize,
    pub schema: CategorySchema,
    /// 0 draws edge endpoints uniformly; 1 gives full distance decay and
    /// identity preference.
    pub homophily: f64,
    pub mean_degree: f64,
    pub n_words: usize,
    pub seeds_per_word: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(
        n_agents: usize,
        n_counties: usize,
        schema: CategorySchema,
        homophily: f64,
        mean_degree: f64,
        seed: u64,
    ) -> Self {
        GeneratorSpec {
            n_agents,
            n_counties,
            schema,
            homophily,
            mean_degree,
            n_words: 20,
            seeds_per_word: 10,
            seed,
        }
    }
}

const DISTANCE_SCALE_KM: f64 = 300.0;
const SIMILARITY_EXPONENT: i32 = 6;
const URBAN_SHARE: f64 = 0.13;
const MAX_ATTEMPTS: usize = 10_000;

fn similarity(a: &[f64], b: &[f64]) -> f64 {
    1.0 - a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

/// Counties with a Zipf size profile on a continental box; identities from
/// smooth spatial fields plus noise; edges from a distance and similarity
/// kernel whose strength is `homophily`; Pareto mention counts that grow with
/// similarity. Output depends only on `spec`.
pub fn generate_world(spec: &GeneratorSpec) -> Result<WorldBundle> {
    let (n, k) = (spec.n_agents, spec.n_counties);
    if k < 2 || n < k {
        return Err(Error::invalid(format!(
            "need n_agents >= n_counties >= 2, got {n} agents and {k} counties"
        )));
    }
    if !(0.0..=1.0).contains(&spec.homophily) {
        return Err(Error::invalid("homophily must lie in [0,1]"));
    }
    let edge_target = (n as f64 * spec.mean_degree).round() as usize;
    if spec.mean_degree.is_nan()
        || spec.mean_degree <= 0.0
        || edge_target as f64 > 0.25 * (n as f64) * (n as f64 - 1.0)
    {
        return Err(Error::invalid(format!(
            "mean degree {} is infeasible for {n} agents",
            spec.mean_degree
        )));
    }
    if spec.seeds_per_word == 0 || spec.seeds_per_word > n {
        return Err(Error::invalid(
            "seeds_per_word must be between 1 and n_agents",
        ));
    }
    let h = spec.homophily;
    let mut r = rng::sequential(spec.seed, "world");

    // county sizes: Zipf weights over a random rank order, one agent minimum
    let mut rank: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        rank.swap(i, r.random_range(0..=i));
    }
    let weights: Vec<f64> = rank
        .iter()
        .map(|&q| 1.0 / (q as f64 + 1.0).powf(1.1))
        .collect();
    let total: f64 = weights.iter().sum();
    let spare = (n - k) as f64;
    let mut sizes: Vec<usize> = weights
        .iter()
        .map(|w| 1 + (spare * w / total).floor() as usize)
        .collect();
    let mut short = n - sizes.iter().sum::<usize>();
    let mut by_remainder: Vec<usize> = (0..k).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = (spare * weights[a] / total).fract();
        let rb = (spare * weights[b] / total).fract();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &c in by_remainder.iter().cycle() {
        if short == 0 {
            break;
        }
        sizes[c] += 1;
        short -= 1;
    }

    let urban_count = ((k as f64 * URBAN_SHARE).round() as usize).max(2).min(k);
    let mut by_size: Vec<usize> = (0..k).collect();
    by_size.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut counties: Vec<County> = (0..k)
        .map(|c| County {
            code: format!("{:05}", 1001 + 2 * c),
            lat: r.random_range(30.0..48.0),
            lon: r.random_range(-120.0..-75.0),
            urbanized_population: (sizes[c] as u64 * 500).min(URBAN_THRESHOLD - 1),
        })
        .collect();
    for &c in &by_size[..urban_count] {
        counties[c].urbanized_population = URBAN_THRESHOLD + 1000 * sizes[c] as u64;
    }

    // identity fields
    let d = spec.schema.dimension();
    let fields: Vec<(f64, f64, f64, f64)> = (0..d)
        .map(|_| {
            let angle: f64 = r.random_range(0.0..std::f64::consts::TAU);
            (
                angle.cos(),
                angle.sin(),
                r.random_range(2.0..6.0),
                r.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let center = |c: &County, m: usize| {
        let x = (c.lon + 120.0) / 45.0;
        let y = (c.lat - 30.0) / 18.0;
        let (cx, cy, f, phase) = fields[m];
        0.5 + 0.35 * (f * (cx * x + cy * y) + phase).sin()
    };
    let noise = Normal::new(0.0, 0.12).unwrap();
    let jitter = Normal::new(0.0, 0.2).unwrap();
    let mut agent_county = Vec::with_capacity(n);
    let mut locations = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for (c, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            agent_county.push(c);
            locations.push((
                counties[c].lat + jitter.sample(&mut r),
                counties[c].lon + jitter.sample(&mut r),
            ));
            rows.push(
                (0..d)
                    .map(|m| (center(&counties[c], m) + noise.sample(&mut r)).clamp(0.0, 1.0))
                    .collect::<Vec<f64>>(),
            );
        }
    }
    let assignment = CountyAssignment::new(counties, agent_county)?;
    let members = assignment.members();
    let centroids: Vec<(f64, f64)> = assignment
        .counties()
        .iter()
        .map(|c| (c.lat, c.lon))
        .collect();

    // county kernels
    let kernels: Vec<WeightedIndex<f64>> = (0..k)
        .map(|a| {
            let w: Vec<f64> = (0..k)
                .map(|b| {
                    sizes[b] as f64
                        * (-h * haversine_km(centroids[a], centroids[b]) / DISTANCE_SCALE_KM).exp()
                })
                .collect();
            WeightedIndex::new(w).map_err(|e| Error::Internal(e.to_string()))
        })
        .collect::<Result<_>>()?;

    let pareto = Pareto::new(1.0, 1.3).unwrap();
    let mut seen = std::collections::HashSet::with_capacity(edge_target);
    let mut edges: Vec<(AgentId, AgentId, u32)> = Vec::with_capacity(edge_target);
    while edges.len() < edge_target {
        let i = r.random_range(0..n);
        let ci = assignment.county_of(i as AgentId);
        let mut placed = false;
        for _ in 0..MAX_ATTEMPTS {
            let cj = kernels[ci].sample(&mut r);
            let j = members[cj][r.random_range(0..members[cj].len())] as usize;
            if j == i || seen.contains(&(i, j)) {
                continue;
            }
            let s = similarity(&rows[i], &rows[j]);
            if r.random::<f64>() >= (1.0 - h) + h * s.powi(SIMILARITY_EXPONENT) {
                continue;
            }
            seen.insert((i, j));
            let m = (pareto.sample(&mut r) * (1.0 + 4.0 * h * s))
                .floor()
                .clamp(1.0, 100_000.0) as u32;
            edges.push((i as AgentId, j as AgentId, m));
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::invalid(format!(
                "could not place {edge_target} edges; mean degree too high"
            )));
        }
    }
    let graph = compute_edge_weights(&SocialGraph::from_mentions(n, &edges)?)?;

    // words: an anchor agent plus its nearest, most similar peers
    let mut words = Vec::with_capacity(spec.n_words);
    for w in 0..spec.n_words {
        let a = r.random_range(0..n);
        let mut scored: Vec<(f64, usize)> = (0..n)
            .map(|j| {
                let km = haversine_km(locations[a], locations[j]);
                (
                    km / DISTANCE_SCALE_KM + 10.0 * (1.0 - similarity(&rows[a], &rows[j])),
                    j,
                )
            })
            .collect();
        scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut adopters: Vec<AgentId> = vec![a as AgentId];
        adopters.extend(
            scored
                .iter()
                .filter(|s| s.1 != a)
                .take(spec.seeds_per_word - 1)
                .map(|s| s.1 as AgentId),
        );
        words.push(WordSeed {
            word: format!("w{w:03}"),
            adopters,
        });
    }

    Ok(WorldBundle {
        ids: IdTable::from_names((0..n).map(|i| format!("a{i}"))),
        graph,
        population: Population::new(spec.schema.clone(), rows)?,
        counties: assignment,
        agent_locations: locations,
        words,
        usage: None,
    })
}
