//! Action-selection strategies behind a common [`Policy`] interface.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::env::{EnvironmentSpec, JointAction, RoundOutcome};
use crate::error::{Error, Result};

mod cooperative;
mod independent;
pub mod oracle;
mod random;
mod tcoop;
pub mod ucb;

pub use cooperative::CooperativeUcb;
pub use independent::IndependentUcb;
pub use oracle::{oracle_allocation, OracleSolution, DEFAULT_ENUMERATION_GUARD};
pub use random::RandomPolicy;
pub use tcoop::{TCoopState, TCoopUcb};

/// One round of interaction: `select_actions`, then exactly one `observe`
/// with that round's outcome.
pub trait Policy: Send {
    fn kind(&self) -> PolicyKind;

    /// `round` starts at 1.
    fn select_actions(&mut self, round: u64, rng: &mut dyn RngCore) -> JointAction;

    fn observe(&mut self, round: u64, feedback: &RoundOutcome);

    /// Current threshold estimates, for policies that learn them.
    fn threshold_estimates(&self) -> Option<&[usize]> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Random,
    #[serde(rename = "independent_ucb1")]
    IndependentUcb1,
    #[serde(rename = "cooperative_ucb1")]
    CooperativeUcb1,
    TCoopUcb,
    Oracle,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Random,
        PolicyKind::IndependentUcb1,
        PolicyKind::CooperativeUcb1,
        PolicyKind::TCoopUcb,
        PolicyKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Random => "random",
            PolicyKind::IndependentUcb1 => "independent_ucb1",
            PolicyKind::CooperativeUcb1 => "cooperative_ucb1",
            PolicyKind::TCoopUcb => "t_coop_ucb",
            PolicyKind::Oracle => "oracle",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.map(Self::name).join(", ")
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownPolicy {
                name: s.to_owned(),
                valid: Self::valid_names(),
            })
    }
}

/// Knobs shared by the policy constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyParams {
    /// Consecutive failures before T-Coop-UCB raises a threshold estimate.
    pub failure_threshold: u32,
    pub enumeration_guard: u64,
}

impl Default for PolicyParams {
    fn default() -> Self {
        Self {
            failure_threshold: 5,
            enumeration_guard: DEFAULT_ENUMERATION_GUARD,
        }
    }
}

/// Replays the optimal allocation every round.
#[derive(Debug, Clone)]
pub struct OraclePolicy {
    action: JointAction,
}

impl OraclePolicy {
    pub fn new(spec: &EnvironmentSpec, guard: u64) -> Result<Self> {
        let solution = oracle_allocation(spec, guard)?;
        Ok(Self {
            action: JointAction::from_allocation(&solution.allocation, spec.num_agents()),
        })
    }
}

impl Policy for OraclePolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Oracle
    }

    fn select_actions(&mut self, _round: u64, _rng: &mut dyn RngCore) -> JointAction {
        self.action.clone()
    }

    fn observe(&mut self, _round: u64, _feedback: &RoundOutcome) {}
}

pub fn build_policy(
    kind: PolicyKind,
    spec: &EnvironmentSpec,
    params: &PolicyParams,
) -> Result<Box<dyn Policy>> {
    Ok(match kind {
        PolicyKind::Random => Box::new(RandomPolicy::new(spec)),
        PolicyKind::IndependentUcb1 => Box::new(IndependentUcb::new(spec)),
        PolicyKind::CooperativeUcb1 => Box::new(CooperativeUcb::new(spec)),
        PolicyKind::TCoopUcb => Box::new(TCoopUcb::new(spec, params.failure_threshold)),
        PolicyKind::Oracle => Box::new(OraclePolicy::new(spec, params.enumeration_guard)?),
    })
}

/// Running sample mean, updated in place.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMean {
    pub mean: f64,
    pub count: u64,
}

impl RunningMean {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.mean += (x - self.mean) / self.count as f64;
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}
