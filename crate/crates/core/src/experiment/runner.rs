use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::seed::{policy_rng, stream_seed, EnvironmentStreams};
use crate::error::{Error, Result};
use crate::metrics::{self, AggregateSeries, RunRecord};
use crate::policies::{build_policy, oracle_allocation, OracleSolution, PolicyKind};

/// How (policy, run) pairs are scheduled. Results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Run-level parallelism on the current rayon pool. Without the
    /// `parallel` feature this is the same as `Serial`.
    #[default]
    Parallel,
}

/// Plays one seeded run of `horizon` rounds.
pub fn run_single(
    config: &ExperimentConfig,
    policy: PolicyKind,
    run_index: u32,
) -> Result<RunRecord> {
    let spec = &config.environment;
    let mut agent = build_policy(policy, spec, &config.policy_params())?;
    let mut rng = policy_rng(config.base_seed, policy.name(), run_index);
    let streams = EnvironmentStreams::new(config.base_seed, run_index);
    let horizon = config.horizon as usize;
    let mut record = RunRecord::with_capacity(run_index, policy.name(), spec.num_arms(), horizon);
    for round in 1..=config.horizon {
        let action = agent.select_actions(round, &mut rng);
        debug_assert!(action.validate(spec).is_ok());
        let outcome = spec.resolve_round(&action, &mut streams.round(round));
        agent.observe(round, &outcome);
        record.push_round(&outcome);
    }
    record.final_threshold_estimates = agent.threshold_estimates().map(<[usize]>::to_vec);
    Ok(record)
}

/// Cross-run aggregates for one policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyAggregates {
    pub cumulative_reward: AggregateSeries,
    pub regret: AggregateSeries,
    pub windowed_reward: AggregateSeries,
}

impl PolicyAggregates {
    pub fn from_runs(runs: &[RunRecord], mu_star: f64, window: usize) -> Result<Self> {
        let cumulative: Vec<_> = runs.iter().map(metrics::cumulative_reward).collect();
        let regret: Vec<_> = runs
            .iter()
            .map(|r| metrics::regret_series(r, mu_star))
            .collect();
        let windowed: Vec<_> = runs
            .iter()
            .map(|r| metrics::windowed_reward(r, window))
            .collect();
        Ok(Self {
            cumulative_reward: metrics::aggregate_ci(&cumulative)?,
            regret: metrics::aggregate_ci(&regret)?,
            windowed_reward: metrics::aggregate_ci(&windowed)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyResult {
    pub policy: PolicyKind,
    /// Ordered by run index.
    pub runs: Vec<RunRecord>,
    pub aggregates: PolicyAggregates,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    /// SHA-256 of the normalized config.
    pub config_hash: String,
    pub base_seed: u64,
    pub software_version: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub oracle: OracleSolution,
    /// Sorted by policy name.
    pub policies: Vec<PolicyResult>,
    pub provenance: Provenance,
}

impl ExperimentResult {
    pub fn policy(&self, kind: PolicyKind) -> Option<&PolicyResult> {
        self.policies.iter().find(|p| p.policy == kind)
    }

    pub fn policy_seed(&self, kind: PolicyKind, run_index: u32) -> u64 {
        stream_seed(self.config.base_seed, kind.name(), run_index)
    }
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    let digest = Sha256::digest(config.to_toml().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(config, Execution::default())
}

pub fn run_experiment_with(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<ExperimentResult> {
    config.validate()?;
    let oracle = oracle_allocation(&config.environment, config.oracle_max_allocations)?;
    let mut kinds = config.policies.clone();
    kinds.sort_by_key(|k| k.name());

    let jobs: Vec<(PolicyKind, u32)> = kinds
        .iter()
        .flat_map(|&k| (0..config.num_runs).map(move |r| (k, r)))
        .collect();
    let run = |&(kind, run_index): &(PolicyKind, u32)| {
        run_single(config, kind, run_index).map_err(|e| Error::Run {
            policy: kind.name().to_owned(),
            run_index,
            source: Box::new(e),
        })
    };
    let records: Vec<RunRecord> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            jobs.par_iter().map(run).collect::<Result<_>>()?
        }
        _ => jobs.iter().map(run).collect::<Result<_>>()?,
    };

    let mut records = records.into_iter();
    let mut policies = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let runs: Vec<RunRecord> = records.by_ref().take(config.num_runs as usize).collect();
        let aggregates =
            PolicyAggregates::from_runs(&runs, oracle.mu_star, config.smoothing_window)?;
        policies.push(PolicyResult {
            policy: kind,
            runs,
            aggregates,
        });
    }

    Ok(ExperimentResult {
        provenance: Provenance {
            config_hash: config_hash(config),
            base_seed: config.base_seed,
            software_version: env!("CARGO_PKG_VERSION"),
        },
        config: config.clone(),
        oracle,
        policies,
    })
}
