use rand::RngCore;

use super::ucb::{greedy_coalition_assignment, ucb_value};
use super::{Policy, PolicyKind, RunningMean};
use crate::env::{EnvironmentSpec, JointAction, RoundOutcome};

/// Cooperative UCB1: shared team-level statistics, greedy coalitions sized by
/// the true thresholds, which it is given up front and never revises.
#[derive(Debug, Clone)]
pub struct CooperativeUcb {
    stats: Vec<RunningMean>,
    known_thresholds: Vec<usize>,
    num_agents: usize,
}

impl CooperativeUcb {
    pub fn new(spec: &EnvironmentSpec) -> Self {
        Self {
            stats: vec![RunningMean::default(); spec.num_arms()],
            known_thresholds: spec.thresholds(),
            num_agents: spec.num_agents(),
        }
    }

    pub fn stats(&self) -> &[RunningMean] {
        &self.stats
    }

    pub fn scores(&self, round: u64) -> Vec<f64> {
        self.stats
            .iter()
            .map(|s| ucb_value(s.mean, s.count, round))
            .collect()
    }
}

impl Policy for CooperativeUcb {
    fn kind(&self) -> PolicyKind {
        PolicyKind::CooperativeUcb1
    }

    fn select_actions(&mut self, round: u64, _rng: &mut dyn RngCore) -> JointAction {
        greedy_coalition_assignment(&self.scores(round), &self.known_thresholds, self.num_agents)
    }

    fn observe(&mut self, _round: u64, feedback: &RoundOutcome) {
        for (arm, stats) in self.stats.iter_mut().enumerate() {
            let n = feedback.coalition_sizes[arm];
            if n > 0 && n >= self.known_thresholds[arm] {
                // a Bernoulli failure averages in a zero
                stats.push(feedback.arm_rewards[arm]);
            }
        }
    }
}
