//! Experiment configuration files.
//!
//! Configs are TOML: scalar keys at the top level and one `[[arms]]` table
//! per arm.
//!
//! ```toml
//! num_agents = 3
//! horizon = 10000            # default 10000
//! num_runs = 30              # default 30
//! base_seed = 42             # default 0
//! failure_threshold_m = 5    # default 5
//! smoothing_window = 100     # default 100
//! policies = ["random", "independent_ucb1", "cooperative_ucb1", "t_coop_ucb", "oracle"]
//!
//! [[arms]]
//! success_prob = 0.5
//! reward_magnitude = 5.0
//! threshold = 1
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::{ArmSpec, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::policies::{PolicyKind, PolicyParams, DEFAULT_ENUMERATION_GUARD};

pub const DEFAULT_HORIZON: u64 = 10_000;
pub const DEFAULT_NUM_RUNS: u32 = 30;
pub const DEFAULT_FAILURE_THRESHOLD: u32 = 5;
pub const DEFAULT_SMOOTHING_WINDOW: usize = 100;

/// Keys accepted by [`ExperimentConfig::apply_override`].
pub const OVERRIDE_KEYS: [&str; 4] = ["horizon", "runs", "seed", "m"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    num_agents: Option<usize>,
    arms: Option<Vec<ArmSpec>>,
    horizon: Option<u64>,
    num_runs: Option<u32>,
    base_seed: Option<u64>,
    failure_threshold_m: Option<u32>,
    policies: Option<Vec<String>>,
    smoothing_window: Option<usize>,
    oracle_max_allocations: Option<u64>,
}

/// A fully validated experiment description with defaults resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub environment: EnvironmentSpec,
    pub horizon: u64,
    pub num_runs: u32,
    pub base_seed: u64,
    pub failure_threshold_m: u32,
    pub policies: Vec<PolicyKind>,
    pub smoothing_window: usize,
    pub oracle_max_allocations: u64,
}

/// Serialized form of the effective config; same keys as the input file.
#[derive(Debug, Serialize)]
struct EffectiveConfig<'a> {
    num_agents: usize,
    horizon: u64,
    num_runs: u32,
    base_seed: u64,
    failure_threshold_m: u32,
    smoothing_window: usize,
    oracle_max_allocations: u64,
    policies: Vec<&'static str>,
    arms: &'a [ArmSpec],
}

impl ExperimentConfig {
    /// The base environment with every default applied.
    pub fn table1() -> Self {
        Self {
            environment: EnvironmentSpec::table1(),
            horizon: DEFAULT_HORIZON,
            num_runs: DEFAULT_NUM_RUNS,
            base_seed: 0,
            failure_threshold_m: DEFAULT_FAILURE_THRESHOLD,
            policies: PolicyKind::ALL.to_vec(),
            smoothing_window: DEFAULT_SMOOTHING_WINDOW,
            oracle_max_allocations: DEFAULT_ENUMERATION_GUARD,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Parses config text; `origin` only labels errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string().trim_end().to_owned(),
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let num_agents = raw
            .num_agents
            .ok_or_else(|| Error::field("num_agents", "missing"))?;
        let arms = raw.arms.ok_or_else(|| Error::field("arms", "missing"))?;
        let environment = EnvironmentSpec::new(arms, num_agents)?;
        let policies = match raw.policies {
            None => PolicyKind::ALL.to_vec(),
            Some(names) => names
                .iter()
                .map(|n| n.parse())
                .collect::<Result<Vec<PolicyKind>>>()?,
        };
        let config = Self {
            environment,
            horizon: raw.horizon.unwrap_or(DEFAULT_HORIZON),
            num_runs: raw.num_runs.unwrap_or(DEFAULT_NUM_RUNS),
            base_seed: raw.base_seed.unwrap_or(0),
            failure_threshold_m: raw.failure_threshold_m.unwrap_or(DEFAULT_FAILURE_THRESHOLD),
            policies,
            smoothing_window: raw.smoothing_window.unwrap_or(DEFAULT_SMOOTHING_WINDOW),
            oracle_max_allocations: raw
                .oracle_max_allocations
                .unwrap_or(DEFAULT_ENUMERATION_GUARD),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::field("horizon", "must be at least 1"));
        }
        if self.num_runs == 0 {
            return Err(Error::field("num_runs", "must be at least 1"));
        }
        if self.failure_threshold_m == 0 {
            return Err(Error::field("failure_threshold_m", "must be at least 1"));
        }
        if self.smoothing_window == 0 {
            return Err(Error::field("smoothing_window", "must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::field(
                "policies",
                format!("must name at least one of: {}", PolicyKind::valid_names()),
            ));
        }
        let mut seen = self.policies.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::field("policies", "contains a duplicate"));
        }
        Ok(())
    }

    /// Applies one `key=value` override. Only scalar knobs can be changed;
    /// the environment comes from the file alone.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::field(assignment, "override must look like key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: std::num::ParseIntError| Error::field(key, format!("`{value}`: {e}"));
        match key {
            "horizon" => self.horizon = value.parse().map_err(bad)?,
            "runs" => self.num_runs = value.parse().map_err(bad)?,
            "seed" => self.base_seed = value.parse().map_err(bad)?,
            "m" => self.failure_threshold_m = value.parse().map_err(bad)?,
            _ => {
                return Err(Error::field(
                    key,
                    format!("unknown override key (valid: {})", OVERRIDE_KEYS.join(", ")),
                ))
            }
        }
        self.validate()
    }

    pub fn policy_params(&self) -> PolicyParams {
        PolicyParams {
            failure_threshold: self.failure_threshold_m,
            enumeration_guard: self.oracle_max_allocations,
        }
    }

    fn effective(&self) -> EffectiveConfig<'_> {
        EffectiveConfig {
            num_agents: self.environment.num_agents(),
            horizon: self.horizon,
            num_runs: self.num_runs,
            base_seed: self.base_seed,
            failure_threshold_m: self.failure_threshold_m,
            smoothing_window: self.smoothing_window,
            oracle_max_allocations: self.oracle_max_allocations,
            policies: self.policies.iter().map(|p| p.name()).collect(),
            arms: self.environment.arms(),
        }
    }

    /// Normalized TOML with every default spelled out.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.effective()).expect("config serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.effective()).expect("config serializes")
    }
}
