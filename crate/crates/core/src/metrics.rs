//! Per-run evaluation metrics and cross-run aggregation.

use serde::Serialize;

use crate::error::{Error, Result};

/// z-score of the two-sided 95% normal interval.
pub const Z_95: f64 = 1.96;

/// Describes how `ci_halfwidth` is computed; echoed into run metadata.
pub const CI_METHOD: &str =
    "normal approximation, 1.96 * s / sqrt(R), s with divisor R-1; 0 when R = 1";

/// Round-by-round trace of one seeded run.
///
/// Per-arm series are stored round-major: entry `t * num_arms + arm`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: u32,
    pub policy_name: String,
    pub num_arms: usize,
    pub team_reward: Vec<f64>,
    pub coalition_sizes: Vec<u32>,
    pub activated: Vec<bool>,
    pub succeeded: Vec<bool>,
    /// Threshold estimates at the end of the run, for policies that learn them.
    pub final_threshold_estimates: Option<Vec<usize>>,
}

impl RunRecord {
    pub fn with_capacity(run_id: u32, policy_name: &str, num_arms: usize, horizon: usize) -> Self {
        Self {
            run_id,
            policy_name: policy_name.to_owned(),
            num_arms,
            team_reward: Vec::with_capacity(horizon),
            coalition_sizes: Vec::with_capacity(horizon * num_arms),
            activated: Vec::with_capacity(horizon * num_arms),
            succeeded: Vec::with_capacity(horizon * num_arms),
            final_threshold_estimates: None,
        }
    }

    pub fn push_round(&mut self, outcome: &crate::env::RoundOutcome) {
        debug_assert_eq!(outcome.coalition_sizes.len(), self.num_arms);
        self.team_reward.push(outcome.team_reward);
        self.coalition_sizes
            .extend(outcome.coalition_sizes.iter().map(|&n| n as u32));
        self.activated.extend_from_slice(&outcome.activated);
        self.succeeded.extend_from_slice(&outcome.succeeded);
    }

    pub fn horizon(&self) -> usize {
        self.team_reward.len()
    }

    /// Coalition sizes of round `t` (0-based).
    pub fn round_coalitions(&self, t: usize) -> &[u32] {
        &self.coalition_sizes[t * self.num_arms..(t + 1) * self.num_arms]
    }

    pub fn round_succeeded(&self, t: usize) -> &[bool] {
        &self.succeeded[t * self.num_arms..(t + 1) * self.num_arms]
    }

    /// Keeps only rounds `range`, e.g. to count allocations in a late window.
    pub fn slice_rounds(&self, range: std::ops::Range<usize>) -> RunRecord {
        let k = self.num_arms;
        let arm_range = range.start * k..range.end * k;
        RunRecord {
            run_id: self.run_id,
            policy_name: self.policy_name.clone(),
            num_arms: k,
            team_reward: self.team_reward[range].to_vec(),
            coalition_sizes: self.coalition_sizes[arm_range.clone()].to_vec(),
            activated: self.activated[arm_range.clone()].to_vec(),
            succeeded: self.succeeded[arm_range].to_vec(),
            final_threshold_estimates: self.final_threshold_estimates.clone(),
        }
    }
}

/// Prefix sums of the team reward.
pub fn cumulative_reward(record: &RunRecord) -> Vec<f64> {
    record
        .team_reward
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r;
            Some(*acc)
        })
        .collect()
}

/// `t * mu_star - cumulative_reward[t]` for `t = 1..=T`. Not clipped.
pub fn regret_series(record: &RunRecord, mu_star: f64) -> Vec<f64> {
    cumulative_reward(record)
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i + 1) as f64 * mu_star - c)
        .collect()
}

/// Trailing-window mean of the team reward; the first `window - 1` rounds
/// average over the rounds seen so far.
pub fn windowed_reward(record: &RunRecord, window: usize) -> Vec<f64> {
    let window = window.max(1);
    let rewards = &record.team_reward;
    let mut out = Vec::with_capacity(rewards.len());
    let mut sum = 0.0;
    for (t, &r) in rewards.iter().enumerate() {
        sum += r;
        if t >= window {
            sum -= rewards[t - window];
        }
        out.push(sum / (t + 1).min(window) as f64);
    }
    out
}

/// Rounds in which each arm's coalition met its true threshold, whether or
/// not the reward fired.
pub fn valid_allocation_counts(record: &RunRecord, true_thresholds: &[usize]) -> Vec<u64> {
    let mut counts = vec![0u64; record.num_arms];
    for t in 0..record.horizon() {
        for (arm, &n) in record.round_coalitions(t).iter().enumerate() {
            if n > 0 && n as usize >= true_thresholds[arm] {
                counts[arm] += 1;
            }
        }
    }
    counts
}

/// Rounds in which each arm paid out.
pub fn success_counts(record: &RunRecord) -> Vec<u64> {
    let mut counts = vec![0u64; record.num_arms];
    for t in 0..record.horizon() {
        for (arm, &s) in record.round_succeeded(t).iter().enumerate() {
            counts[arm] += u64::from(s);
        }
    }
    counts
}

/// Per-round mean and 95% CI halfwidth across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateSeries {
    pub mean: Vec<f64>,
    pub ci_halfwidth: Vec<f64>,
    pub num_runs: usize,
}

impl AggregateSeries {
    pub fn last(&self) -> (f64, f64) {
        (
            *self.mean.last().unwrap_or(&0.0),
            *self.ci_halfwidth.last().unwrap_or(&0.0),
        )
    }
}

/// Aggregates equal-length per-run series. Values are sorted per round before
/// summation so the result does not depend on run order.
pub fn aggregate_ci<S: AsRef<[f64]>>(runs: &[S]) -> Result<AggregateSeries> {
    let first = runs.first().ok_or(Error::NoRuns)?.as_ref().len();
    for (run, s) in runs.iter().enumerate() {
        if s.as_ref().len() != first {
            return Err(Error::RaggedSeries {
                run,
                got: s.as_ref().len(),
                expected: first,
            });
        }
    }
    let r = runs.len();
    let mut mean = Vec::with_capacity(first);
    let mut ci_halfwidth = Vec::with_capacity(first);
    let mut column = vec![0.0; r];
    for t in 0..first {
        for (slot, s) in column.iter_mut().zip(runs) {
            *slot = s.as_ref()[t];
        }
        let (m, h) = mean_and_halfwidth(&mut column);
        mean.push(m);
        ci_halfwidth.push(h);
    }
    Ok(AggregateSeries {
        mean,
        ci_halfwidth,
        num_runs: r,
    })
}

/// Sample mean and 95% normal halfwidth of a set of scalars. Sorts `values`.
pub fn mean_and_halfwidth(values: &mut [f64]) -> (f64, f64) {
    let r = values.len();
    if r == 0 {
        return (f64::NAN, 0.0);
    }
    values.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / r as f64;
    if r == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (r - 1) as f64).sqrt();
    (mean, Z_95 * sd / (r as f64).sqrt())
}

/// `mu_star * t` and `mu_star * ln t` for `t = 1..=horizon`.
pub fn reference_curves(mu_star: f64, horizon: usize) -> (Vec<f64>, Vec<f64>) {
    (1..=horizon)
        .map(|t| {
            let t = t as f64;
            (mu_star * t, mu_star * t.ln())
        })
        .unzip()
}

/// Least-squares slope of `series` against `t = 1..=len`.
pub fn ols_slope(series: &[f64]) -> f64 {
    let n = series.len() as f64;
    let t_mean = (n + 1.0) / 2.0;
    let y_mean = series.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in series.iter().enumerate() {
        let dt = (i + 1) as f64 - t_mean;
        sxy += dt * (y - y_mean);
        sxx += dt * dt;
    }
    sxy / sxx
}
