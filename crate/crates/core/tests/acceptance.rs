//! Full-scale acceptance checks on the base environment (3 agents, 5 arms,
//! 10,000 rounds, 30 runs). Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use coopbandit::experiment::{
    run_experiment_with, write_results, Execution, ExperimentConfig, ExperimentResult,
};
use coopbandit::metrics;
use coopbandit::policies::{oracle_allocation, PolicyKind, DEFAULT_ENUMERATION_GUARD};
use coopbandit::EnvironmentSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DECOY_ARM: usize = 4;
const TEAM_ARM: usize = 2;
const M_VALUES: [u32; 3] = [3, 5, 10];

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn config_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/table1.config")
}

fn base_config() -> ExperimentConfig {
    ExperimentConfig::load(config_path()).expect("base config loads")
}

/// Final cumulative reward: (mean, ci halfwidth).
fn final_reward(res: &ExperimentResult, kind: PolicyKind) -> (f64, f64) {
    res.policy(kind)
        .expect("policy ran")
        .aggregates
        .cumulative_reward
        .last()
}

fn exact_oracle() -> Outcome {
    let sol = oracle_allocation(&EnvironmentSpec::table1(), DEFAULT_ENUMERATION_GUARD).unwrap();
    Outcome {
        name: "exact oracle value",
        pass: sol.allocation == [0, 0, 3, 0, 0] && sol.mu_star == 12.0,
        detail: format!("allocation {:?}, mu* = {}", sol.allocation, sol.mu_star),
    }
}

fn oracle_empirical(res: &ExperimentResult) -> Outcome {
    let runs = &res.policy(PolicyKind::Oracle).unwrap().runs;
    let rounds: usize = runs.iter().map(|r| r.horizon()).sum();
    let total: f64 = runs.iter().flat_map(|r| r.team_reward.iter()).sum();
    let mean = total / rounds as f64;
    Outcome {
        name: "oracle empirical mean",
        pass: (mean - 12.0).abs() <= 0.10,
        detail: format!("{mean:.4} per round over {rounds} rounds (need 12 +/- 0.10)"),
    }
}

fn ordering(results: &[(u32, ExperimentResult)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, res) in results {
        let [o, t, c, i, r] = [
            PolicyKind::Oracle,
            PolicyKind::TCoopUcb,
            PolicyKind::CooperativeUcb1,
            PolicyKind::IndependentUcb1,
            PolicyKind::Random,
        ]
        .map(|k| final_reward(res, k));
        let means_ok = o.0 > t.0 && t.0 > c.0 && c.0 > i.0 && i.0 > r.0;
        let cis_ok = t.0 - t.1 > c.0 + c.1 && c.0 - c.1 > i.0 + i.1 && i.0 - i.1 > r.0 + r.1;
        pass &= means_ok && cis_ok;
        parts.push(format!(
            "m={m}: oracle {:.0}, t-coop {:.0}+/-{:.0}, coop {:.0}+/-{:.0}, indep {:.0}+/-{:.0}, random {:.0}+/-{:.0}",
            o.0, t.0, t.1, c.0, c.1, i.0, i.1, r.0, r.1
        ));
    }
    Outcome {
        name: "policy ordering",
        pass,
        detail: parts.join("; "),
    }
}

fn sublinear_regret(results: &[(u32, ExperimentResult)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, res) in results {
        let regret = &res
            .policy(PolicyKind::TCoopUcb)
            .unwrap()
            .aggregates
            .regret
            .mean;
        let horizon = regret.len();
        let early = regret[999] / 1000.0;
        let late = regret[horizon - 1] / horizon as f64;
        let budget = 0.15 * res.oracle.mu_star * horizon as f64;
        pass &= late < 0.5 * early && regret[horizon - 1] < budget;
        parts.push(format!(
            "m={m}: R(1k)/1k {early:.3}, R(T)/T {late:.3}, R(T) {:.0} < {budget:.0}",
            regret[horizon - 1]
        ));
    }
    Outcome {
        name: "sublinear regret",
        pass,
        detail: parts.join("; "),
    }
}

fn threshold_learning(results: &[(u32, ExperimentResult)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, res) in results {
        let runs = &res.policy(PolicyKind::TCoopUcb).unwrap().runs;
        let hits = runs
            .iter()
            .filter(|r| {
                r.final_threshold_estimates
                    .as_ref()
                    .is_some_and(|h| h[TEAM_ARM] == 3)
            })
            .count();
        pass &= hits * 10 >= runs.len() * 9;
        parts.push(format!("m={m}: {hits}/{}", runs.len()));
    }
    Outcome {
        name: "threshold learning",
        pass,
        detail: parts.join("; "),
    }
}

fn decoy_avoidance(results: &[(u32, ExperimentResult)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, res) in results {
        let thresholds = res.config.environment.thresholds();
        let horizon = res.config.horizon as usize;
        let tail = horizon - 5000;
        let tcoop = &res.policy(PolicyKind::TCoopUcb).unwrap().runs;
        let random = &res.policy(PolicyKind::Random).unwrap().runs;
        let late: Vec<u64> = tcoop
            .iter()
            .map(|r| {
                metrics::valid_allocation_counts(&r.slice_rounds(tail..horizon), &thresholds)
                    [DECOY_ARM]
            })
            .collect();
        let worst = late.iter().copied().max().unwrap_or(0);
        let overall = |runs: &[metrics::RunRecord]| {
            runs.iter()
                .map(|r| metrics::valid_allocation_counts(r, &thresholds)[DECOY_ARM] as f64)
                .sum::<f64>()
                / runs.len() as f64
        };
        let (t_all, r_all) = (overall(tcoop), overall(random));
        pass &= (worst as f64) < 0.01 * 5000.0 && t_all < r_all;
        parts.push(format!(
            "m={m}: worst run {worst}/5000 late, mean overall {t_all:.1} vs random {r_all:.1}"
        ));
    }
    Outcome {
        name: "decoy avoidance",
        pass,
        detail: parts.join("; "),
    }
}

fn monte_carlo_vs_analytic() -> Outcome {
    const ROUNDS: u32 = 100_000;
    let spec = EnvironmentSpec::table1();
    let mut pick = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_z: f64 = 0.0;
    let mut pass = true;
    for case in 0..20u64 {
        // each agent idles or picks an arm uniformly
        let choices: Vec<Option<usize>> = (0..spec.num_agents())
            .map(|_| {
                let c = pick.random_range(0..=spec.num_arms());
                (c < spec.num_arms()).then_some(c)
            })
            .collect();
        let action = coopbandit::JointAction::new(choices);
        let allocation = action.coalition_sizes(spec.num_arms());
        let expected = spec.expected_team_reward(&allocation).unwrap();
        let variance: f64 = spec
            .arms()
            .iter()
            .zip(&allocation)
            .filter(|(a, &n)| n > 0 && n >= a.threshold)
            .map(|(a, _)| a.success_prob * (1.0 - a.success_prob) * a.reward_magnitude.powi(2))
            .sum();
        let mut rng = ChaCha8Rng::seed_from_u64(7_000 + case);
        let total: f64 = (0..ROUNDS)
            .map(|_| spec.resolve_round(&action, &mut rng).team_reward)
            .sum();
        let mean = total / f64::from(ROUNDS);
        let se = (variance / f64::from(ROUNDS)).sqrt();
        if se == 0.0 {
            pass &= mean == expected;
        } else {
            let z = (mean - expected).abs() / se;
            worst_z = worst_z.max(z);
            pass &= z <= 4.0;
        }
    }
    Outcome {
        name: "monte carlo vs analytic",
        pass,
        detail: format!("20 allocations x {ROUNDS} rounds, worst |z| = {worst_z:.2} (need <= 4)"),
    }
}

fn random_regret_slope(res: &ExperimentResult) -> Outcome {
    let spec = &res.config.environment;
    let (k, m) = (spec.num_arms(), spec.num_agents());
    let joint = k.pow(m as u32);
    let mut total = 0.0;
    for code in 0..joint {
        let mut allocation = vec![0; k];
        let mut c = code;
        for _ in 0..m {
            allocation[c % k] += 1;
            c /= k;
        }
        total += spec.expected_team_reward(&allocation).unwrap();
    }
    let uniform = total / joint as f64;
    let target = res.oracle.mu_star - uniform;
    let slope = metrics::ols_slope(
        &res.policy(PolicyKind::Random)
            .unwrap()
            .aggregates
            .regret
            .mean,
    );
    let rel = (slope - target).abs() / target;
    Outcome {
        name: "random regret slope",
        pass: rel < 0.05,
        detail: format!(
            "slope {slope:.4} vs mu* - E[uniform] = {target:.4} over {joint} joint actions, rel err {:.2}%",
            rel * 100.0
        ),
    }
}

fn determinism(config: &ExperimentConfig, first: &ExperimentResult) -> Outcome {
    let second = run_experiment_with(config, Execution::Parallel).unwrap();
    let serial = run_experiment_with(config, Execution::Serial).unwrap();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    write_results(first, dirs[0].path()).unwrap();
    write_results(&second, dirs[1].path()).unwrap();
    let mut identical = Vec::new();
    for name in [
        "timeseries.csv",
        "allocations.csv",
        "aggregates.csv",
        "meta.json",
    ] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        identical.push((name, a == b));
    }
    let files_ok = identical.iter().all(|(_, same)| *same);
    let serial_ok = &serial == first;
    Outcome {
        name: "determinism",
        pass: files_ok && serial_ok,
        detail: format!(
            "byte-identical outputs: {}; serial == parallel: {serial_ok}",
            identical
                .iter()
                .map(|(n, s)| format!("{n}={s}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    }
}

fn main() -> ExitCode {
    let base = base_config();
    let results: Vec<(u32, ExperimentResult)> = M_VALUES
        .iter()
        .map(|&m| {
            let mut c = base.clone();
            c.failure_threshold_m = m;
            (
                m,
                run_experiment_with(&c, Execution::Parallel).expect("experiment runs"),
            )
        })
        .collect();
    let default_run = &results
        .iter()
        .find(|(m, _)| *m == base.failure_threshold_m)
        .expect("default m is swept")
        .1;

    let outcomes = [
        exact_oracle(),
        oracle_empirical(default_run),
        ordering(&results),
        sublinear_regret(&results),
        threshold_learning(&results),
        decoy_avoidance(&results),
        monte_carlo_vs_analytic(),
        random_regret_slope(default_run),
        determinism(&base, default_run),
    ];

    let mut failed = 0;
    for o in &outcomes {
        println!(
            "{} {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
