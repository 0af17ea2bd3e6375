use rand::RngCore;

use super::ucb::{greedy_coalition_assignment, ucb_value};
use super::{Policy, PolicyKind};
use crate::env::{EnvironmentSpec, JointAction, RoundOutcome};

/// Shared estimates synchronized across the team.
///
/// `mean_estimates` are team-level rewards, zeros included for failed pulls
/// whose coalition met the current threshold estimate. Failures with a
/// coalition smaller than the estimate carry no information and are dropped.
///
/// The exploration bonus of an arm is scaled by the largest reward it has
/// paid so far (the largest seen on any arm while it has paid nothing), so
/// confidence widths are in the same units as the means.
#[derive(Debug, Clone, PartialEq)]
pub struct TCoopState {
    pub mean_estimates: Vec<f64>,
    pub attempt_counts: Vec<u64>,
    pub threshold_estimates: Vec<usize>,
    pub consecutive_failures: Vec<u32>,
    /// Largest reward observed on each arm; 0 until the arm first pays.
    pub reward_scales: Vec<f64>,
    pub failure_threshold: u32,
    pub num_agents: usize,
}

impl TCoopState {
    /// Every threshold estimate starts at `num_agents`.
    pub fn new(num_arms: usize, num_agents: usize, failure_threshold: u32) -> Self {
        assert!(failure_threshold >= 1, "failure threshold must be positive");
        Self {
            mean_estimates: vec![0.0; num_arms],
            attempt_counts: vec![0; num_arms],
            threshold_estimates: vec![num_agents; num_arms],
            consecutive_failures: vec![0; num_arms],
            reward_scales: vec![0.0; num_arms],
            failure_threshold,
            num_agents,
        }
    }

    fn num_arms(&self) -> usize {
        self.mean_estimates.len()
    }

    fn push_sample(&mut self, arm: usize, reward: f64) {
        self.attempt_counts[arm] += 1;
        self.mean_estimates[arm] +=
            (reward - self.mean_estimates[arm]) / self.attempt_counts[arm] as f64;
    }

    fn reset_stats(&mut self, arm: usize) {
        self.mean_estimates[arm] = 0.0;
        self.attempt_counts[arm] = 0;
    }

    fn scale(&self, arm: usize) -> f64 {
        if self.reward_scales[arm] > 0.0 {
            return self.reward_scales[arm];
        }
        let widest = self.reward_scales.iter().copied().fold(0.0, f64::max);
        if widest > 0.0 {
            widest
        } else {
            1.0
        }
    }

    pub fn scores(&self, round: u64) -> Vec<f64> {
        (0..self.num_arms())
            .map(|i| {
                let s = self.scale(i);
                s * ucb_value(self.mean_estimates[i] / s, self.attempt_counts[i], round)
            })
            .collect()
    }

    pub fn select(&self, round: u64) -> JointAction {
        greedy_coalition_assignment(
            &self.scores(round),
            &self.threshold_estimates,
            self.num_agents,
        )
    }

    /// Applies one round of feedback for every arm that was pulled.
    pub fn observe(&mut self, coalition_sizes: &[usize], arm_rewards: &[f64]) {
        for arm in 0..self.num_arms() {
            let n = coalition_sizes[arm];
            if n == 0 {
                continue;
            }
            let reward = arm_rewards[arm];
            if reward > 0.0 {
                self.reward_scales[arm] = self.reward_scales[arm].max(reward);
                if n < self.threshold_estimates[arm] {
                    self.threshold_estimates[arm] = n;
                }
                self.consecutive_failures[arm] = 0;
                self.push_sample(arm, reward);
            } else if n >= self.threshold_estimates[arm] {
                self.push_sample(arm, 0.0);
                self.consecutive_failures[arm] += 1;
                if self.consecutive_failures[arm] >= self.failure_threshold {
                    if self.threshold_estimates[arm] < self.num_agents {
                        self.threshold_estimates[arm] += 1;
                        // samples taken under the old estimate were censored
                        self.reset_stats(arm);
                    }
                    self.consecutive_failures[arm] = 0;
                }
            }
        }
    }
}

/// Threshold-learning cooperative UCB.
#[derive(Debug, Clone)]
pub struct TCoopUcb {
    state: TCoopState,
}

impl TCoopUcb {
    pub fn new(spec: &EnvironmentSpec, failure_threshold: u32) -> Self {
        Self {
            state: TCoopState::new(spec.num_arms(), spec.num_agents(), failure_threshold),
        }
    }

    pub fn from_state(state: TCoopState) -> Self {
        Self { state }
    }

    pub fn state(&self) -> &TCoopState {
        &self.state
    }
}

impl Policy for TCoopUcb {
    fn kind(&self) -> PolicyKind {
        PolicyKind::TCoopUcb
    }

    fn select_actions(&mut self, round: u64, _rng: &mut dyn RngCore) -> JointAction {
        self.state.select(round)
    }

    fn observe(&mut self, _round: u64, feedback: &RoundOutcome) {
        self.state
            .observe(&feedback.coalition_sizes, &feedback.arm_rewards);
    }

    fn threshold_estimates(&self) -> Option<&[usize]> {
        Some(&self.state.threshold_estimates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulled(arm: usize, n: usize, reward: f64) -> (Vec<usize>, Vec<f64>) {
        let mut sizes = vec![0; 5];
        let mut rewards = vec![0.0; 5];
        sizes[arm] = n;
        rewards[arm] = reward;
        (sizes, rewards)
    }

    #[test]
    fn first_round_sends_everyone_to_arm_zero() {
        let s = TCoopState::new(5, 3, 5);
        assert_eq!(s.select(1).choices(), &[Some(0), Some(0), Some(0)]);
    }

    #[test]
    fn full_team_on_best_arm() {
        let mut s = TCoopState::new(5, 3, 5);
        s.attempt_counts = vec![50; 5];
        s.mean_estimates = vec![2.0, 5.0, 12.0, 8.0, 0.0];
        s.reward_scales = vec![10.0, 10.0, 20.0, 20.0, 0.0];
        assert_eq!(s.select(300).choices(), &[Some(2), Some(2), Some(2)]);
    }

    #[test]
    fn failures_below_estimate_are_ignored() {
        let mut s = TCoopState::new(5, 3, 2);
        let (sizes, rewards) = pulled(1, 2, 0.0);
        for _ in 0..10 {
            s.observe(&sizes, &rewards);
        }
        assert_eq!(s.attempt_counts[1], 0);
        assert_eq!(s.threshold_estimates[1], 3);
    }

    #[test]
    fn m_failures_raise_estimate_and_reset() {
        let mut s = TCoopState::new(5, 3, 3);
        s.threshold_estimates[3] = 2;
        s.attempt_counts[3] = 4;
        s.mean_estimates[3] = 7.0;
        let (sizes, rewards) = pulled(3, 2, 0.0);
        s.observe(&sizes, &rewards);
        s.observe(&sizes, &rewards);
        assert_eq!(s.threshold_estimates[3], 2);
        assert_eq!(s.attempt_counts[3], 6);
        s.observe(&sizes, &rewards);
        assert_eq!(s.threshold_estimates[3], 3);
        assert_eq!(s.attempt_counts[3], 0);
        assert_eq!(s.mean_estimates[3], 0.0);
        assert_eq!(s.consecutive_failures[3], 0);
    }

    #[test]
    fn success_resets_failure_streak() {
        let mut s = TCoopState::new(5, 3, 3);
        s.threshold_estimates[0] = 1;
        let (fail_sizes, fail) = pulled(0, 1, 0.0);
        let (_, win) = pulled(0, 1, 10.0);
        s.observe(&fail_sizes, &fail);
        s.observe(&fail_sizes, &fail);
        s.observe(&fail_sizes, &win);
        s.observe(&fail_sizes, &fail);
        s.observe(&fail_sizes, &fail);
        assert_eq!(s.threshold_estimates[0], 1);
        assert_eq!(s.attempt_counts[0], 5);
        assert!((s.mean_estimates[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn success_with_smaller_coalition_lowers_estimate() {
        let mut s = TCoopState::new(5, 3, 5);
        let (sizes, rewards) = pulled(1, 1, 5.0);
        s.observe(&sizes, &rewards);
        assert_eq!(s.threshold_estimates[1], 1);
        assert_eq!(s.attempt_counts[1], 1);
        assert_eq!(s.reward_scales[1], 5.0);
    }

    #[test]
    fn estimate_is_capped_at_team_size() {
        let mut s = TCoopState::new(5, 3, 2);
        let (sizes, rewards) = pulled(4, 3, 0.0);
        let mut last = f64::INFINITY;
        for k in 1..=20 {
            s.observe(&sizes, &rewards);
            assert_eq!(s.threshold_estimates[4], 3);
            assert_eq!(s.attempt_counts[4], k);
            let score = s.scores(1000)[4];
            assert!(score < last, "decoy score must fall with each zero");
            last = score;
        }
        assert_eq!(s.mean_estimates[4], 0.0);
    }

    #[test]
    fn bonus_scales_with_observed_rewards() {
        let mut s = TCoopState::new(2, 1, 5);
        s.attempt_counts = vec![4, 4];
        s.mean_estimates = vec![1.0, 1.0];
        let unit = s.scores(10);
        s.reward_scales = vec![20.0, 0.0];
        let scaled = s.scores(10);
        let bonus = (2.0 * 10f64.ln() / 4.0).sqrt();
        assert!((unit[0] - (1.0 + bonus)).abs() < 1e-12);
        assert!((scaled[0] - (1.0 + 20.0 * bonus)).abs() < 1e-9);
        // an arm that never paid borrows the widest observed scale
        assert!((scaled[1] - scaled[0]).abs() < 1e-9);
    }
}
