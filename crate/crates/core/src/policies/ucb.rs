//! UCB scores and greedy coalition formation shared by the cooperative policies.

use crate::env::JointAction;

/// `mean + sqrt(2 ln t / count)`, or `+inf` for an arm with no samples.
pub fn ucb_value(mean: f64, count: u64, round: u64) -> f64 {
    debug_assert!(round >= 1);
    if count == 0 {
        return f64::INFINITY;
    }
    mean + (2.0 * (round as f64).ln() / count as f64).sqrt()
}

/// Arm indices sorted by descending score, ties by ascending index.
pub fn rank_arms(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable sort keeps ascending index among equal scores
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order
}

/// Per-arm allocation produced by one greedy pass: visit arms best-first and
/// give each exactly `thresholds[arm]` agents while enough remain. Arms that
/// need more agents than are left are skipped; nothing is topped up.
pub fn greedy_allocation(scores: &[f64], thresholds: &[usize], num_agents: usize) -> Vec<usize> {
    debug_assert_eq!(scores.len(), thresholds.len());
    let mut allocation = vec![0; scores.len()];
    let mut remaining = num_agents;
    for arm in rank_arms(scores) {
        let need = thresholds[arm];
        if need >= 1 && need <= remaining {
            allocation[arm] = need;
            remaining -= need;
        }
        if remaining == 0 {
            break;
        }
    }
    allocation
}

/// Greedy coalition formation. Agents fill arms in ascending agent order,
/// arm by arm in ascending arm index; leftover agents idle.
pub fn greedy_coalition_assignment(
    scores: &[f64],
    thresholds: &[usize],
    num_agents: usize,
) -> JointAction {
    JointAction::from_allocation(
        &greedy_allocation(scores, thresholds, num_agents),
        num_agents,
    )
}
