//! File formats, world bundles, synthetic worlds, and experiment plans.
//!
//! All inputs are tab-separated text without headers; blank lines and lines
//! starting with `#` are skipped. Agents and counties are referred to by
//! arbitrary string ids and remapped to dense indices in the order of the
//! agent file.
//!
//! | file              | columns                                              |
//! |-------------------|------------------------------------------------------|
//! | `graph.tsv`       | source, target, mention count                        |
//! | `agents.tsv`      | agent, county code, lat, lon                         |
//! | `counties.tsv`    | county code, centroid lat, centroid lon, urbanized population |
//! | `identities.tsv`  | agent, then one value in `[0,1]` per register        |
//! | `schema.json`     | `{"categories": [{"name", "registers": [..]}]}`      |
//! | `seeds.tsv`       | word, then its initial adopters in order             |
//! | `usage.tsv`       | word, agent, timestamp (optional)                    |

mod experiment;
mod generate;
mod output;
mod world;

pub use experiment::{
    run_experiment, synthesize_usage, CalibrationOutcome, CalibrationSettings, EvaluationSettings,
    Evaluator, ExperimentPlan, ExperimentSummary, JobResult, ModeSummary,
};
pub use generate::{generate_world, GeneratorSpec};
pub use output::{
    digest, read_pathways_tsv, write_distribution_tsv, write_json, write_pathways_tsv, Stamped,
};
pub use world::{
    load_world, read_usage, write_usage, write_world, IdTable, UsageRecord, WordSeed, WorldBundle,
    WorldPaths,
};
