use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result, Violation};
use crate::identity::{CategorySchema, Population};
use crate::network::{compute_edge_weights, AgentId, County, CountyAssignment, SocialGraph};

/// Dense agent indices for string ids, in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdTable {
    ids: Vec<String>,
    index: HashMap<String, AgentId>,
}

impl IdTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `id` if absent; returns its index and whether it was new.
    pub fn insert(&mut self, id: &str) -> (AgentId, bool) {
        if let Some(&i) = self.index.get(id) {
            return (i, false);
        }
        let i = self.ids.len() as AgentId;
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        (i, true)
    }

    pub fn get(&self, id: &str) -> Option<AgentId> {
        self.index.get(id).copied()
    }

    pub fn name(&self, agent: AgentId) -> &str {
        &self.ids[agent as usize]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn from_names(names: impl IntoIterator<Item = String>) -> Self {
        let mut t = IdTable::new();
        for n in names {
            t.insert(&n);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordSeed {
    pub word: String,
    pub adopters: Vec<AgentId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UsageRecord {
    pub word: String,
    pub agent: AgentId,
    pub timestamp: f64,
}

/// A validated world: network, identities, geography, words, and optional
/// observed usage.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldBundle {
    pub ids: IdTable,
    /// Edge weights already computed from mention counts.
    pub graph: SocialGraph,
    pub population: Population,
    pub counties: CountyAssignment,
    pub agent_locations: Vec<(f64, f64)>,
    pub words: Vec<WordSeed>,
    pub usage: Option<Vec<UsageRecord>>,
}

impl WorldBundle {
    pub fn word(&self, word: &str) -> Option<&WordSeed> {
        self.words.iter().find(|w| w.word == word)
    }

    /// Observed usage records of one word.
    pub fn usage_of<'a>(&'a self, word: &'a str) -> impl Iterator<Item = &'a UsageRecord> + 'a {
        self.usage.iter().flatten().filter(move |u| u.word == word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldPaths {
    pub graph: PathBuf,
    pub agents: PathBuf,
    pub counties: PathBuf,
    pub identities: PathBuf,
    pub schema: PathBuf,
    pub seeds: PathBuf,
    pub usage: Option<PathBuf>,
}

impl WorldPaths {
    /// Standard file names inside `dir`; `usage.tsv` is used when present.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let d = dir.as_ref();
        let usage = d.join("usage.tsv");
        WorldPaths {
            graph: d.join("graph.tsv"),
            agents: d.join("agents.tsv"),
            counties: d.join("counties.tsv"),
            identities: d.join("identities.tsv"),
            schema: d.join("schema.json"),
            seeds: d.join("seeds.tsv"),
            usage: usage.exists().then_some(usage),
        }
    }
}

struct Lines<'a> {
    path: &'a Path,
    text: String,
}

impl<'a> Lines<'a> {
    fn read(path: &'a Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Lines { path, text })
    }

    /// `(line number, fields)` for every data line.
    fn records(&self) -> impl Iterator<Item = (usize, Vec<&str>)> {
        self.text.lines().enumerate().filter_map(|(i, l)| {
            let l = l.trim_end_matches('\r');
            if l.trim().is_empty() || l.starts_with('#') {
                None
            } else {
                Some((i + 1, l.split('\t').collect()))
            }
        })
    }

    fn violation(&self, line: usize, message: impl Into<String>) -> Violation {
        Violation::at(self.path, line, message)
    }
}

fn parse<T: std::str::FromStr>(field: &str, what: &str) -> std::result::Result<T, String> {
    field
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse {what} from {field:?}"))
}

fn expect_columns(fields: &[&str], n: usize, what: &str) -> std::result::Result<(), String> {
    if fields.len() == n {
        Ok(())
    } else {
        Err(format!(
            "{what} line needs {n} columns, found {}",
            fields.len()
        ))
    }
}

/// Reads and cross-validates a world. Every problem found in any file is
/// collected into one [`Error::Validation`].
pub fn load_world(paths: &WorldPaths) -> Result<WorldBundle> {
    let mut v: Vec<Violation> = Vec::new();

    // counties
    let county_file = Lines::read(&paths.counties)?;
    let mut counties: Vec<County> = Vec::new();
    let mut county_index: HashMap<String, usize> = HashMap::new();
    for (line, f) in county_file.records() {
        let parsed = expect_columns(&f, 4, "county").and_then(|_| {
            Ok(County {
                code: f[0].trim().to_string(),
                lat: parse(f[1], "latitude")?,
                lon: parse(f[2], "longitude")?,
                urbanized_population: parse(f[3], "urbanized population")?,
            })
        });
        match parsed {
            Ok(c) if county_index.contains_key(&c.code) => {
                v.push(county_file.violation(line, format!("duplicate county {}", c.code)))
            }
            Ok(c) => {
                county_index.insert(c.code.clone(), counties.len());
                counties.push(c);
            }
            Err(m) => v.push(county_file.violation(line, m)),
        }
    }

    // agents
    let agent_file = Lines::read(&paths.agents)?;
    let mut ids = IdTable::new();
    let mut agent_county = Vec::new();
    let mut agent_locations = Vec::new();
    for (line, f) in agent_file.records() {
        let parsed = expect_columns(&f, 4, "agent").and_then(|_| {
            Ok((
                parse::<f64>(f[2], "latitude")?,
                parse::<f64>(f[3], "longitude")?,
            ))
        });
        match parsed {
            Ok(loc) => {
                let (_, fresh) = ids.insert(f[0].trim());
                if !fresh {
                    v.push(agent_file.violation(line, format!("duplicate agent {}", f[0].trim())));
                    continue;
                }
                match county_index.get(f[1].trim()) {
                    Some(&c) => agent_county.push(c),
                    None => {
                        v.push(agent_file.violation(
                            line,
                            format!("agent {} in unknown county {}", f[0].trim(), f[1].trim()),
                        ));
                        agent_county.push(usize::MAX);
                    }
                }
                agent_locations.push(loc);
            }
            Err(m) => v.push(agent_file.violation(line, m)),
        }
    }
    let n = ids.len();

    // schema and identities
    let schema: Option<CategorySchema> = match fs::read_to_string(&paths.schema) {
        Ok(text) => match serde_json::from_str(&text) {
            Ok(s) => Some(s),
            Err(e) => {
                v.push(Violation::new(format!("{}: {e}", paths.schema.display())));
                None
            }
        },
        Err(e) => return Err(Error::io(&paths.schema, e)),
    };
    let identity_file = Lines::read(&paths.identities)?;
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; n];
    for (line, f) in identity_file.records() {
        let Some(agent) = ids.get(f[0].trim()) else {
            v.push(
                identity_file
                    .violation(line, format!("identity for unknown agent {}", f[0].trim())),
            );
            continue;
        };
        if let Some(s) = &schema {
            if f.len() - 1 != s.dimension() {
                v.push(identity_file.violation(
                    line,
                    format!(
                        "identity dimension mismatch: expected {}, found {}",
                        s.dimension(),
                        f.len() - 1
                    ),
                ));
                continue;
            }
        }
        let values: std::result::Result<Vec<f64>, String> =
            f[1..].iter().map(|x| parse(x, "identity value")).collect();
        match values {
            Ok(vals) if vals.iter().any(|x| !(0.0..=1.0).contains(x)) => {
                v.push(identity_file.violation(line, "identity values must lie in [0,1]"))
            }
            Ok(vals) => {
                if rows[agent as usize].replace(vals).is_some() {
                    v.push(identity_file.violation(
                        line,
                        format!("duplicate identity for agent {}", f[0].trim()),
                    ));
                }
            }
            Err(m) => v.push(identity_file.violation(line, m)),
        }
    }
    for (i, r) in rows.iter().enumerate() {
        if r.is_none() {
            v.push(Violation::new(format!(
                "{}: agent {} has no identity",
                paths.identities.display(),
                ids.name(i as AgentId)
            )));
        }
    }

    // edges
    let graph_file = Lines::read(&paths.graph)?;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, f) in graph_file.records() {
        if let Err(m) = expect_columns(&f, 3, "edge") {
            v.push(graph_file.violation(line, m));
            continue;
        }
        let mut ends = [0 as AgentId; 2];
        let mut ok = true;
        for (k, id) in f[..2].iter().enumerate() {
            match ids.get(id.trim()) {
                Some(a) => ends[k] = a,
                None => {
                    v.push(
                        graph_file.violation(
                            line,
                            format!("edge references unknown agent {}", id.trim()),
                        ),
                    );
                    ok = false;
                }
            }
        }
        let mentions = match parse::<u32>(f[2], "mention count") {
            Ok(0) => {
                v.push(graph_file.violation(line, "mention count must be positive"));
                continue;
            }
            Ok(m) => m,
            Err(m) => {
                v.push(graph_file.violation(line, m));
                continue;
            }
        };
        if !ok {
            continue;
        }
        if ends[0] == ends[1] {
            v.push(graph_file.violation(line, format!("self-loop on agent {}", f[0].trim())));
        } else if !seen.insert((ends[0], ends[1])) {
            v.push(graph_file.violation(
                line,
                format!("duplicate edge {} -> {}", f[0].trim(), f[1].trim()),
            ));
        } else {
            edges.push((ends[0], ends[1], mentions));
        }
    }

    // words
    let seed_file = Lines::read(&paths.seeds)?;
    let mut words = Vec::new();
    for (line, f) in seed_file.records() {
        let word = f[0].trim().to_string();
        if f.len() < 2 {
            v.push(seed_file.violation(line, format!("word {word} has no initial adopters")));
            continue;
        }
        if words.iter().any(|w: &WordSeed| w.word == word) {
            v.push(seed_file.violation(line, format!("duplicate word {word}")));
            continue;
        }
        let mut adopters = Vec::new();
        for id in &f[1..] {
            match ids.get(id.trim()) {
                Some(a) => adopters.push(a),
                None => v.push(seed_file.violation(
                    line,
                    format!("word {word} seeds unknown agent {}", id.trim()),
                )),
            }
        }
        words.push(WordSeed { word, adopters });
    }

    let usage = match &paths.usage {
        None => None,
        Some(p) => {
            let (records, problems) = parse_usage(&Lines::read(p)?, &ids);
            v.extend(problems);
            Some(records)
        }
    };

    if n == 0 {
        v.push(Violation::new(format!(
            "{}: no agents",
            paths.agents.display()
        )));
    }
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }

    let schema = schema.expect("checked above");
    let population = Population::new(
        schema,
        rows.into_iter()
            .map(|r| r.expect("checked above"))
            .collect(),
    )?;
    let graph = compute_edge_weights(&SocialGraph::from_mentions(n, &edges)?)?;
    let counties = CountyAssignment::new(counties, agent_county)?;
    Ok(WorldBundle {
        ids,
        graph,
        population,
        counties,
        agent_locations,
        words,
        usage,
    })
}

fn parse_usage(file: &Lines<'_>, ids: &IdTable) -> (Vec<UsageRecord>, Vec<Violation>) {
    let mut out = Vec::new();
    let mut v = Vec::new();
    for (line, f) in file.records() {
        if let Err(m) = expect_columns(&f, 3, "usage") {
            v.push(file.violation(line, m));
            continue;
        }
        let Some(agent) = ids.get(f[1].trim()) else {
            v.push(file.violation(line, format!("usage by unknown agent {}", f[1].trim())));
            continue;
        };
        match parse::<f64>(f[2], "timestamp") {
            Ok(t) if t.is_finite() => out.push(UsageRecord {
                word: f[0].trim().to_string(),
                agent,
                timestamp: t,
            }),
            Ok(_) => v.push(file.violation(line, "timestamp must be finite")),
            Err(m) => v.push(file.violation(line, m)),
        }
    }
    (out, v)
}

/// Reads a `word<TAB>agent<TAB>timestamp` file against an existing id table.
pub fn read_usage(path: &Path, ids: &IdTable) -> Result<Vec<UsageRecord>> {
    let (records, problems) = parse_usage(&Lines::read(path)?, ids);
    if problems.is_empty() {
        Ok(records)
    } else {
        Err(Error::Validation(problems))
    }
}

/// Writes usage records in the format [`read_usage`] reads.
pub fn write_usage(path: &Path, usage: &[UsageRecord], ids: &IdTable) -> Result<()> {
    let mut s = String::new();
    for u in usage {
        writeln!(s, "{}\t{}\t{}", u.word, ids.name(u.agent), u.timestamp).unwrap();
    }
    write_file(path, &s)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `world` in the standard layout; [`load_world`] reads it back
/// unchanged.
pub fn write_world(world: &WorldBundle, dir: impl AsRef<Path>) -> Result<WorldPaths> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = |a: AgentId| world.ids.name(a);

    let mut s = String::new();
    for c in world.counties.counties() {
        writeln!(
            s,
            "{}\t{}\t{}\t{}",
            c.code, c.lat, c.lon, c.urbanized_population
        )
        .unwrap();
    }
    write_file(&dir.join("counties.tsv"), &s)?;

    s.clear();
    for a in 0..world.ids.len() {
        let c = &world.counties.counties()[world.counties.county_of(a as AgentId)];
        let (lat, lon) = world.agent_locations[a];
        writeln!(s, "{}\t{}\t{lat}\t{lon}", name(a as AgentId), c.code).unwrap();
    }
    write_file(&dir.join("agents.tsv"), &s)?;

    s.clear();
    for a in 0..world.population.len() {
        s.push_str(name(a as AgentId));
        for x in world.population.row(a as AgentId) {
            write!(s, "\t{x}").unwrap();
        }
        s.push('\n');
    }
    write_file(&dir.join("identities.tsv"), &s)?;
    write_file(
        &dir.join("schema.json"),
        &serde_json::to_string_pretty(world.population.schema())?,
    )?;

    s.clear();
    for e in world.graph.edges() {
        writeln!(s, "{}\t{}\t{}", name(e.source), name(e.target), e.mentions).unwrap();
    }
    write_file(&dir.join("graph.tsv"), &s)?;

    s.clear();
    for w in &world.words {
        s.push_str(&w.word);
        for &a in &w.adopters {
            write!(s, "\t{}", name(a)).unwrap();
        }
        s.push('\n');
    }
    write_file(&dir.join("seeds.tsv"), &s)?;

    let usage_path = dir.join("usage.tsv");
    if let Some(usage) = &world.usage {
        write_usage(&usage_path, usage, &world.ids)?;
    } else if usage_path.exists() {
        fs::remove_file(&usage_path).map_err(|e| Error::io(&usage_path, e))?;
    }
    Ok(WorldPaths::in_dir(dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, files: &[(&str, &str)]) -> WorldPaths {
        for (name, text) in files {
            fs::write(dir.join(name), text).unwrap();
        }
        WorldPaths::in_dir(dir)
    }

    const SCHEMA: &str = r#"{"categories":[{"name":"age","registers":["young","old"]}]}"#;

    fn minimal(dir: &Path) -> WorldPaths {
        write(
            dir,
            &[
                ("counties.tsv", "01001\t32.5\t-86.6\t120000\n"),
                (
                    "agents.tsv",
                    "alice\t01001\t32.5\t-86.6\nbob\t01001\t32.6\t-86.5\n",
                ),
                ("identities.tsv", "alice\t0.2\t0.8\nbob\t0.9\t0.1\n"),
                ("schema.json", SCHEMA),
                ("graph.tsv", "alice\tbob\t3\nbob\talice\t1\n"),
                ("seeds.tsv", "yeet\talice\n"),
            ],
        )
    }

    #[test]
    fn minimal_bundle_loads() {
        let dir = tempfile::tempdir().unwrap();
        let w = load_world(&minimal(dir.path())).unwrap();
        assert_eq!(w.ids.len(), 2);
        assert_eq!(w.graph.edge_count(), 2);
        assert_eq!(w.word("yeet").unwrap().adopters, vec![0]);
        assert!(w.usage.is_none());
    }

    #[test]
    fn unknown_agent_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let p = minimal(dir.path());
        fs::write(&p.graph, "alice\tbob\t3\nalice\tcarol\t2\n").unwrap();
        match load_world(&p).unwrap_err() {
            Error::Validation(v) => {
                assert_eq!(v.len(), 1);
                assert!(v[0].message.contains("carol"));
                assert_eq!(v[0].line, Some(2));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn wrong_width_reports_expected_and_actual() {
        let dir = tempfile::tempdir().unwrap();
        let p = minimal(dir.path());
        fs::write(&p.identities, "alice\t0.2\t0.8\nbob\t0.9\n").unwrap();
        let msg = load_world(&p).unwrap_err().to_string();
        assert!(msg.contains("expected 2, found 1"), "{msg}");
    }

    #[test]
    fn violations_are_collected() {
        let dir = tempfile::tempdir().unwrap();
        let p = minimal(dir.path());
        fs::write(&p.graph, "alice\tzed\t3\nbob\talice\tmany\n").unwrap();
        fs::write(&p.seeds, "yeet\tghost\n").unwrap();
        match load_world(&p).unwrap_err() {
            Error::Validation(v) => assert_eq!(v.len(), 3),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = load_world(&minimal(dir.path())).unwrap();
        w.usage = Some(vec![UsageRecord {
            word: "yeet".into(),
            agent: 1,
            timestamp: 2.5,
        }]);
        let out = tempfile::tempdir().unwrap();
        let back = load_world(&write_world(&w, out.path()).unwrap()).unwrap();
        assert_eq!(back, w);
    }
}
