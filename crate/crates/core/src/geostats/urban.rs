use serde::{Deserialize, Serialize};

/// Counties whose urbanized areas hold at least this many inhabitants are urban.
pub const URBAN_THRESHOLD: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Urbanicity {
    Urban,
    Rural,
}

pub fn classify_county(urbanized_population: u64) -> Urbanicity {
    if urbanized_population >= URBAN_THRESHOLD {
        Urbanicity::Urban
    } else {
        Urbanicity::Rural
    }
}

/// Type of a county-to-county pathway; direction does not matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    UrbanUrban,
    UrbanRural,
    RuralRural,
}

impl PairClass {
    pub const ALL: [PairClass; 3] = [
        PairClass::UrbanUrban,
        PairClass::UrbanRural,
        PairClass::RuralRural,
    ];

    pub fn of(a: Urbanicity, b: Urbanicity) -> Self {
        match (a, b) {
            (Urbanicity::Urban, Urbanicity::Urban) => PairClass::UrbanUrban,
            (Urbanicity::Rural, Urbanicity::Rural) => PairClass::RuralRural,
            _ => PairClass::UrbanRural,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::UrbanUrban => "urban_urban",
            PairClass::UrbanRural => "urban_rural",
            PairClass::RuralRural => "rural_rural",
        }
    }
}
