use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four model variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Observed network, identity-driven adoption.
    NetworkIdentity,
    /// Observed network, identity similarity fixed at 1.
    NetworkOnly,
    /// Degree-preserving shuffled network, identity-driven adoption.
    IdentityOnly,
    /// Shuffled network, identity similarity fixed at 1.
    Null,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::NetworkIdentity,
        Mode::NetworkOnly,
        Mode::IdentityOnly,
        Mode::Null,
    ];

    pub fn uses_identity(self) -> bool {
        matches!(self, Mode::NetworkIdentity | Mode::IdentityOnly)
    }

    pub fn uses_shuffled_network(self) -> bool {
        matches!(self, Mode::IdentityOnly | Mode::Null)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::NetworkIdentity => "network_identity",
            Mode::NetworkOnly => "network_only",
            Mode::IdentityOnly => "identity_only",
            Mode::Null => "null",
        }
    }

    pub fn index(self) -> u64 {
        match self {
            Mode::NetworkIdentity => 0,
            Mode::NetworkOnly => 1,
            Mode::IdentityOnly => 2,
            Mode::Null => 3,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown mode {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationConfig {
    pub mode: Mode,
    /// Enregisterment percentile threshold.
    pub q: f64,
    /// Attention retained per iteration without exposure.
    pub r: f64,
    /// Exposures after which novelty reaches zero.
    pub theta: u32,
    pub stickiness: f64,
    pub seed: u64,
    pub min_iterations: u32,
    pub stop_window: u32,
    pub stop_growth: f64,
    pub max_iterations: u32,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            mode: Mode::NetworkIdentity,
            q: 0.75,
            r: 0.4,
            theta: 100,
            stickiness: 0.5,
            seed: 0,
            min_iterations: 100,
            stop_window: 10,
            stop_growth: 0.01,
            max_iterations: 2000,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::invalid(format!("Q = {} outside (0,1)", self.q)));
        }
        if !in_unit(self.r) {
            return Err(Error::invalid(format!("r = {} outside [0,1]", self.r)));
        }
        if self.theta < 1 {
            return Err(Error::invalid("theta must be at least 1"));
        }
        if !in_unit(self.stickiness) {
            return Err(Error::invalid(format!(
                "stickiness = {} outside [0,1]",
                self.stickiness
            )));
        }
        if self.stop_window < 1 {
            return Err(Error::invalid("stop_window must be at least 1"));
        }
        if self.stop_growth.is_nan() || self.stop_growth < 0.0 {
            return Err(Error::invalid("stop_growth must be nonnegative"));
        }
        if self.max_iterations < self.min_iterations {
            return Err(Error::invalid("max_iterations below min_iterations"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SimulationConfig::default().validate().unwrap();
    }

    #[test]
    fn bad_parameters_rejected() {
        let base = SimulationConfig::default();
        for c in [
            SimulationConfig {
                r: 1.5,
                ..base.clone()
            },
            SimulationConfig {
                theta: 0,
                ..base.clone()
            },
            SimulationConfig {
                stickiness: -0.1,
                ..base.clone()
            },
            SimulationConfig {
                q: 1.0,
                ..base.clone()
            },
            SimulationConfig {
                max_iterations: 5,
                ..base.clone()
            },
        ] {
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
            assert_eq!(
                serde_json::to_string(&m).unwrap(),
                format!("\"{}\"", m.as_str())
            );
        }
        assert!("both".parse::<Mode>().is_err());
    }
}
