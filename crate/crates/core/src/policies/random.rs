use rand::{Rng, RngCore};

use super::{Policy, PolicyKind};
use crate::env::{EnvironmentSpec, JointAction, RoundOutcome};

/// Every agent picks an arm uniformly at random; nobody idles.
#[derive(Debug, Clone)]
pub struct RandomPolicy {
    num_arms: usize,
    num_agents: usize,
}

impl RandomPolicy {
    pub fn new(spec: &EnvironmentSpec) -> Self {
        Self {
            num_arms: spec.num_arms(),
            num_agents: spec.num_agents(),
        }
    }
}

impl Policy for RandomPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Random
    }

    fn select_actions(&mut self, _round: u64, rng: &mut dyn RngCore) -> JointAction {
        // one draw per agent, in agent order
        JointAction::new(
            (0..self.num_agents)
                .map(|_| Some(rng.random_range(0..self.num_arms)))
                .collect(),
        )
    }

    fn observe(&mut self, _round: u64, _feedback: &RoundOutcome) {}
}
