use rand::seq::index;

use crate::error::{Error, Result};
use crate::network::AgentId;
use crate::rng;

fn unique_in_order(events: impl Iterator<Item = AgentId>) -> Vec<AgentId> {
    let mut seen = std::collections::HashSet::new();
    events.filter(|a| seen.insert(*a)).collect()
}

/// Draws `k` seed adopters from the unique agents behind the first
/// `pool_size` uses of a word. If that pool holds fewer than `k` agents, the
/// 2nd through `k`-th unique adopters overall are added first.
pub fn sample_initial_adopters(
    usage_log: &[(AgentId, f64)],
    k: usize,
    pool_size: usize,
    seed: u64,
) -> Result<Vec<AgentId>> {
    if usage_log.is_empty() {
        return Err(Error::invalid("empty usage log"));
    }
    let mut events = usage_log.to_vec();
    events.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut pool = unique_in_order(events.iter().take(pool_size).map(|e| e.0));
    if pool.len() < k {
        let overall = unique_in_order(events.iter().map(|e| e.0));
        for &a in overall.iter().skip(1).take(k.saturating_sub(1)) {
            if !pool.contains(&a) {
                pool.push(a);
            }
        }
    }
    if pool.len() < k {
        return Err(Error::invalid(format!(
            "only {} unique adopters available, need {k}",
            pool.len()
        )));
    }
    let mut r = rng::sequential(seed, "initial-adopters");
    Ok(index::sample(&mut r, pool.len(), k)
        .into_iter()
        .map(|i| pool[i])
        .collect())
}
