use rand::{Rng, RngCore};

use super::ucb::ucb_value;
use super::{Policy, PolicyKind, RunningMean};
use crate::env::{EnvironmentSpec, JointAction, RoundOutcome};

/// Independent UCB1: each agent learns alone from its own share of rewards.
///
/// Ties between equally scored arms are broken uniformly at random with the
/// run's policy stream. With a fixed index tie-break every agent would see the
/// same rewards and move in lockstep, which is a centralized full-team learner
/// rather than independent agents.
#[derive(Debug, Clone)]
pub struct IndependentUcb {
    /// `stats[agent][arm]`
    stats: Vec<Vec<RunningMean>>,
    last_action: Option<JointAction>,
}

impl IndependentUcb {
    pub fn new(spec: &EnvironmentSpec) -> Self {
        Self {
            stats: vec![vec![RunningMean::default(); spec.num_arms()]; spec.num_agents()],
            last_action: None,
        }
    }

    pub fn agent_stats(&self, agent: usize) -> &[RunningMean] {
        &self.stats[agent]
    }

    fn choose(stats: &[RunningMean], round: u64, rng: &mut dyn RngCore) -> usize {
        let scores: Vec<f64> = stats
            .iter()
            .map(|s| ucb_value(s.mean, s.count, round))
            .collect();
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
        match tied.len() {
            1 => tied[0],
            n => tied[rng.random_range(0..n)],
        }
    }
}

impl Policy for IndependentUcb {
    fn kind(&self) -> PolicyKind {
        PolicyKind::IndependentUcb1
    }

    fn select_actions(&mut self, round: u64, rng: &mut dyn RngCore) -> JointAction {
        let action = JointAction::new(
            self.stats
                .iter()
                .map(|s| Some(Self::choose(s, round, rng)))
                .collect(),
        );
        self.last_action = Some(action.clone());
        action
    }

    fn observe(&mut self, _round: u64, feedback: &RoundOutcome) {
        let action = self
            .last_action
            .take()
            .expect("observe called without a preceding select_actions");
        for (agent, choice) in action.choices().iter().enumerate() {
            if let Some(arm) = *choice {
                // counts every pull, activated or not
                self.stats[agent][arm].push(feedback.agent_rewards[agent]);
            }
        }
    }
}
