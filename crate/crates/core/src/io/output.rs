use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geostats::{PathwayMatrix, SpatialDistribution};

/// Hex SHA-256 of the canonical JSON form of `value`.
pub fn digest<T: Serialize>(value: &T) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(value)?)))
}

/// A payload tagged with the digest of the plan or config that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stamped<T> {
    pub digest: String,
    pub seed: u64,
    pub data: T,
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => fs::create_dir_all(p).map_err(|e| Error::io(p, e)),
        _ => Ok(()),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    ensure_parent(path)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn header(digest: &str, seed: u64) -> String {
    format!("# digest={digest} seed={seed}\n")
}

/// `county<TAB>value` rows under a provenance comment.
pub fn write_distribution_tsv(
    path: &Path,
    dist: &SpatialDistribution,
    digest: &str,
    seed: u64,
) -> Result<()> {
    ensure_parent(path)?;
    let mut s = header(digest, seed);
    writeln!(
        s,
        "# word={} source={} smoothed={}",
        dist.word, dist.source, dist.smoothed
    )
    .unwrap();
    for (c, v) in dist.counties.iter().zip(&dist.values) {
        writeln!(s, "{c}\t{v}").unwrap();
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

/// `source<TAB>target<TAB>tau<TAB>edges<TAB>class` rows keyed by county code.
pub fn write_pathways_tsv(path: &Path, m: &PathwayMatrix, digest: &str, seed: u64) -> Result<()> {
    ensure_parent(path)?;
    let mut s = header(digest, seed);
    for e in &m.entries {
        writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}",
            m.counties[e.source],
            m.counties[e.target],
            e.tau,
            e.edge_count,
            e.class.as_str()
        )
        .unwrap();
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

/// Reads a file written by [`write_pathways_tsv`] against a county universe.
pub fn read_pathways_tsv(path: &Path, counties: &[String]) -> Result<PathwayMatrix> {
    use crate::geostats::{PairClass, PathwayEntry};
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let index = |code: &str| {
        counties
            .iter()
            .position(|c| c == code)
            .ok_or_else(|| Error::invalid(format!("unknown county {code}")))
    };
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let bad = || {
            Error::invalid(format!(
                "{}:{}: malformed pathway line",
                path.display(),
                i + 1
            ))
        };
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(bad());
        }
        entries.push(PathwayEntry {
            source: index(f[0])?,
            target: index(f[1])?,
            tau: f[2].parse().map_err(|_| bad())?,
            edge_count: f[3].parse().map_err(|_| bad())?,
            class: PairClass::ALL
                .into_iter()
                .find(|c| c.as_str() == f[4])
                .ok_or_else(bad)?,
        });
    }
    entries.sort_by_key(|e| (e.source, e.target));
    Ok(PathwayMatrix {
        counties: counties.to_vec(),
        entries,
    })
}
