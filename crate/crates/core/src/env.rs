//! Stationary threshold-activated environment.
//!
//! Each arm pays `reward_magnitude` with probability `success_prob`, but only
//! in rounds where at least `threshold` agents pull it together. A paying arm
//! splits its reward equally among the agents that pulled it. Agents may idle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Latent parameters of one arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmSpec {
    pub success_prob: f64,
    pub reward_magnitude: f64,
    /// Minimum coalition size that activates the arm.
    pub threshold: usize,
}

impl ArmSpec {
    pub fn new(success_prob: f64, reward_magnitude: f64, threshold: usize) -> Self {
        Self {
            success_prob,
            reward_magnitude,
            threshold,
        }
    }

    /// Expected team reward of one pull by a coalition that meets the threshold.
    pub fn expected_reward(&self) -> f64 {
        self.success_prob * self.reward_magnitude
    }
}

/// A validated environment: `arms.len() >= 1`, `num_agents >= 1`, and every
/// threshold in `1..=num_agents`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvironmentSpec {
    arms: Vec<ArmSpec>,
    num_agents: usize,
}

impl EnvironmentSpec {
    pub fn new(arms: Vec<ArmSpec>, num_agents: usize) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::NoArms);
        }
        if num_agents == 0 {
            return Err(Error::NoAgents);
        }
        for (arm, spec) in arms.iter().enumerate() {
            let invalid = |reason: String| Err(Error::InvalidArm { arm, reason });
            if !(0.0..=1.0).contains(&spec.success_prob) {
                return invalid(format!(
                    "success_prob {} is outside [0, 1]",
                    spec.success_prob
                ));
            }
            if !(spec.reward_magnitude >= 0.0 && spec.reward_magnitude.is_finite()) {
                return invalid(format!(
                    "reward_magnitude {} must be finite and nonnegative",
                    spec.reward_magnitude
                ));
            }
            if spec.threshold == 0 || spec.threshold > num_agents {
                return invalid(format!(
                    "threshold {} must lie in 1..={num_agents}",
                    spec.threshold
                ));
            }
        }
        Ok(Self { arms, num_agents })
    }

    /// The base environment: three agents, five arms, arm 4 a decoy.
    pub fn table1() -> Self {
        Self::new(
            vec![
                ArmSpec::new(0.5, 5.0, 1),
                ArmSpec::new(0.7, 6.0, 1),
                ArmSpec::new(0.6, 20.0, 3),
                ArmSpec::new(0.4, 12.0, 2),
                ArmSpec::new(0.0, 0.0, 2),
            ],
            3,
        )
        .expect("table 1 environment is valid")
    }

    pub fn arms(&self) -> &[ArmSpec] {
        &self.arms
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn thresholds(&self) -> Vec<usize> {
        self.arms.iter().map(|a| a.threshold).collect()
    }

    /// Exact expected team reward of a per-arm allocation of agents.
    pub fn expected_team_reward(&self, allocation: &[usize]) -> Result<f64> {
        if allocation.len() != self.num_arms() {
            return Err(Error::AllocationLength {
                got: allocation.len(),
                expected: self.num_arms(),
            });
        }
        let used: usize = allocation.iter().sum();
        if used > self.num_agents {
            return Err(Error::AllocationTooLarge {
                used,
                available: self.num_agents,
            });
        }
        Ok(self
            .arms
            .iter()
            .zip(allocation)
            .filter(|(arm, &n)| n > 0 && n >= arm.threshold)
            .map(|(arm, _)| arm.expected_reward())
            .sum())
    }

    /// Resolves one round. Exactly one uniform draw is taken from `rng` per
    /// activated arm, in ascending arm order; inactive arms consume nothing.
    pub fn resolve_round<R: Rng + ?Sized>(
        &self,
        action: &JointAction,
        rng: &mut R,
    ) -> RoundOutcome {
        debug_assert!(action.validate(self).is_ok());
        let k = self.num_arms();
        let coalition_sizes = action.coalition_sizes(k);
        let mut activated = vec![false; k];
        let mut succeeded = vec![false; k];
        let mut arm_rewards = vec![0.0; k];
        for (j, arm) in self.arms.iter().enumerate() {
            let n = coalition_sizes[j];
            if n == 0 || n < arm.threshold {
                continue;
            }
            activated[j] = true;
            // `gen_bool` skips the draw for p = 1, which would break the
            // one-draw-per-activated-arm contract.
            let u: f64 = rng.random();
            if u < arm.success_prob {
                succeeded[j] = true;
                arm_rewards[j] = arm.reward_magnitude;
            }
        }
        let agent_rewards = action
            .choices()
            .iter()
            .map(|c| match *c {
                Some(j) if succeeded[j] => arm_rewards[j] / coalition_sizes[j] as f64,
                _ => 0.0,
            })
            .collect();
        let team_reward = arm_rewards.iter().sum();
        RoundOutcome {
            coalition_sizes,
            activated,
            succeeded,
            arm_rewards,
            agent_rewards,
            team_reward,
        }
    }
}

/// Per-agent choices for one round; `None` means the agent idles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointAction(Vec<Option<usize>>);

impl JointAction {
    pub fn new(choices: Vec<Option<usize>>) -> Self {
        Self(choices)
    }

    pub fn idle(num_agents: usize) -> Self {
        Self(vec![None; num_agents])
    }

    /// Expands a per-arm allocation, giving the lowest agent indices to the
    /// lowest arm indices. Agents left over idle.
    pub fn from_allocation(allocation: &[usize], num_agents: usize) -> Self {
        let mut choices = Vec::with_capacity(num_agents);
        for (arm, &n) in allocation.iter().enumerate() {
            choices.extend(std::iter::repeat_n(Some(arm), n));
        }
        debug_assert!(choices.len() <= num_agents);
        choices.resize(num_agents, None);
        Self(choices)
    }

    pub fn choices(&self) -> &[Option<usize>] {
        &self.0
    }

    pub fn validate(&self, spec: &EnvironmentSpec) -> Result<()> {
        if self.0.len() != spec.num_agents() {
            return Err(Error::ActionLength {
                got: self.0.len(),
                expected: spec.num_agents(),
            });
        }
        for (agent, choice) in self.0.iter().enumerate() {
            if let Some(arm) = *choice {
                if arm >= spec.num_arms() {
                    return Err(Error::ArmOutOfRange {
                        agent,
                        arm,
                        num_arms: spec.num_arms(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn coalition_sizes(&self, num_arms: usize) -> Vec<usize> {
        let mut counts = vec![0; num_arms];
        for arm in self.0.iter().flatten() {
            counts[*arm] += 1;
        }
        counts
    }
}

/// Everything that happened on each arm in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub coalition_sizes: Vec<usize>,
    /// Coalition met the true threshold.
    pub activated: Vec<bool>,
    /// Activated and the Bernoulli trial succeeded.
    pub succeeded: Vec<bool>,
    /// Team reward realized on each arm (`reward_magnitude` or 0).
    pub arm_rewards: Vec<f64>,
    pub agent_rewards: Vec<f64>,
    pub team_reward: f64,
}
