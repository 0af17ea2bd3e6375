use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulation engine and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("environment must have at least one arm")]
    NoArms,

    #[error("environment must have at least one agent")]
    NoAgents,

    #[error("arm {arm}: {reason}")]
    InvalidArm { arm: usize, reason: String },

    #[error("joint action has {got} entries, expected one per agent ({expected})")]
    ActionLength { got: usize, expected: usize },

    #[error("agent {agent} chose arm {arm}, but the environment has {num_arms} arms")]
    ArmOutOfRange {
        agent: usize,
        arm: usize,
        num_arms: usize,
    },

    #[error("allocation has {got} entries, expected {expected}")]
    AllocationLength { got: usize, expected: usize },

    #[error("allocation uses {used} agents but only {available} exist")]
    AllocationTooLarge { used: usize, available: usize },

    #[error("oracle enumeration needs {needed} allocations, above the guard of {guard}")]
    EnumerationGuard { needed: u128, guard: u64 },

    #[error("unknown policy `{name}` (valid: {valid})")]
    UnknownPolicy { name: String, valid: String },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("cannot aggregate zero runs")]
    NoRuns,

    #[error("series lengths differ: run {run} has {got} entries, expected {expected}")]
    RaggedSeries {
        run: usize,
        got: usize,
        expected: usize,
    },

    #[error("policy `{policy}` run {run_index} failed")]
    Run {
        policy: String,
        run_index: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("failed to parse config {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
