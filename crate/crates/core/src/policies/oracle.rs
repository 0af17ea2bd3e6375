//! Exhaustive search for the allocation with the highest expected team reward.

use crate::env::EnvironmentSpec;
use crate::error::{Error, Result};

/// Default cap on the number of allocations the oracle will enumerate.
pub const DEFAULT_ENUMERATION_GUARD: u64 = 10_000_000;

/// Optimal per-arm allocation and its expected team reward.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub allocation: Vec<usize>,
    pub mu_star: f64,
}

/// Number of ways to place `0..=m` agents into `k` arms, `C(m + k, k)`.
pub fn allocation_count(num_agents: usize, num_arms: usize) -> u128 {
    let (n, k) = (
        num_agents as u128 + num_arms as u128,
        num_arms.min(num_agents) as u128,
    );
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Enumerates every allocation of at most `num_agents` agents, in
/// lexicographic order, and keeps the first maximizer.
pub fn oracle_allocation(spec: &EnvironmentSpec, guard: u64) -> Result<OracleSolution> {
    let needed = allocation_count(spec.num_agents(), spec.num_arms());
    if needed > guard as u128 {
        return Err(Error::EnumerationGuard { needed, guard });
    }
    let mut best = OracleSolution {
        allocation: vec![0; spec.num_arms()],
        mu_star: 0.0,
    };
    let mut current = vec![0; spec.num_arms()];
    search(spec, &mut current, 0, spec.num_agents(), &mut best)?;
    Ok(best)
}

fn search(
    spec: &EnvironmentSpec,
    current: &mut Vec<usize>,
    arm: usize,
    remaining: usize,
    best: &mut OracleSolution,
) -> Result<()> {
    if arm == current.len() {
        let value = spec.expected_team_reward(current)?;
        if value > best.mu_star {
            best.mu_star = value;
            best.allocation.clone_from(current);
        }
        return Ok(());
    }
    for n in 0..=remaining {
        current[arm] = n;
        search(spec, current, arm + 1, remaining - n, best)?;
    }
    current[arm] = 0;
    Ok(())
}
