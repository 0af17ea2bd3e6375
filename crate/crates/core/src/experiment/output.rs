//! Result files.
//!
//! * `timeseries.csv`: `policy,run_id,t,team_reward,cumulative_reward,regret`
//! * `allocations.csv`: `policy,run_id,arm,valid_allocations,successes`
//! * `aggregates.csv`: `policy,t,metric,mean,ci_halfwidth`, metrics
//!   `cumulative_reward`, `regret`, `windowed_reward`
//! * `meta.json`: config echo, `mu_star`, oracle allocation, seeds, CI method
//!
//! Reals use Rust's shortest round-trip formatting. Rows are sorted by policy
//! name, then run, then round (or arm).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use super::runner::ExperimentResult;
use crate::error::{Error, Result};
use crate::metrics::{self, AggregateSeries, CI_METHOD};

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const ALLOCATIONS_FILE: &str = "allocations.csv";
pub const AGGREGATES_FILE: &str = "aggregates.csv";
pub const META_FILE: &str = "meta.json";

pub const TIMESERIES_HEADER: &str = "policy,run_id,t,team_reward,cumulative_reward,regret";
pub const ALLOCATIONS_HEADER: &str = "policy,run_id,arm,valid_allocations,successes";
pub const AGGREGATES_HEADER: &str = "policy,t,metric,mean,ci_halfwidth";

/// Writes all four result files into `out_dir`, creating it if needed.
pub fn write_results(result: &ExperimentResult, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = [
        (
            TIMESERIES_FILE,
            write_timeseries as fn(&ExperimentResult, &mut dyn Write) -> std::io::Result<()>,
        ),
        (ALLOCATIONS_FILE, write_allocations),
        (AGGREGATES_FILE, write_aggregates),
        (META_FILE, write_meta),
    ];
    let mut written = Vec::with_capacity(files.len());
    for (name, writer) in files {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut out = BufWriter::new(file);
        writer(result, &mut out)
            .and_then(|()| out.flush())
            .map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_timeseries(result: &ExperimentResult, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{TIMESERIES_HEADER}")?;
    let mu_star = result.oracle.mu_star;
    for p in &result.policies {
        let name = p.policy.name();
        for run in &p.runs {
            let cumulative = metrics::cumulative_reward(run);
            let regret = metrics::regret_series(run, mu_star);
            for (i, reward) in run.team_reward.iter().enumerate() {
                writeln!(
                    out,
                    "{name},{},{},{reward},{},{}",
                    run.run_id,
                    i + 1,
                    cumulative[i],
                    regret[i]
                )?;
            }
        }
    }
    Ok(())
}

pub fn write_allocations(result: &ExperimentResult, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{ALLOCATIONS_HEADER}")?;
    let thresholds = result.config.environment.thresholds();
    for p in &result.policies {
        for run in &p.runs {
            let valid = metrics::valid_allocation_counts(run, &thresholds);
            let successes = metrics::success_counts(run);
            for arm in 0..run.num_arms {
                writeln!(
                    out,
                    "{},{},{arm},{},{}",
                    p.policy.name(),
                    run.run_id,
                    valid[arm],
                    successes[arm]
                )?;
            }
        }
    }
    Ok(())
}

pub fn write_aggregates(result: &ExperimentResult, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{AGGREGATES_HEADER}")?;
    for p in &result.policies {
        let series: [(&str, &AggregateSeries); 3] = [
            ("cumulative_reward", &p.aggregates.cumulative_reward),
            ("regret", &p.aggregates.regret),
            ("windowed_reward", &p.aggregates.windowed_reward),
        ];
        let horizon = series[0].1.mean.len();
        for t in 0..horizon {
            for (metric, agg) in series {
                writeln!(
                    out,
                    "{},{},{metric},{},{}",
                    p.policy.name(),
                    t + 1,
                    agg.mean[t],
                    agg.ci_halfwidth[t]
                )?;
            }
        }
    }
    Ok(())
}

pub fn write_meta(result: &ExperimentResult, out: &mut dyn Write) -> std::io::Result<()> {
    let seeds: serde_json::Map<String, serde_json::Value> = result
        .policies
        .iter()
        .map(|p| {
            let seeds: Vec<u64> = (0..result.config.num_runs)
                .map(|r| result.policy_seed(p.policy, r))
                .collect();
            (p.policy.name().to_owned(), json!(seeds))
        })
        .collect();
    let environment_seeds: Vec<u64> = (0..result.config.num_runs)
        .map(|r| {
            super::seed::stream_seed(result.config.base_seed, super::seed::ENVIRONMENT_LABEL, r)
        })
        .collect();
    let meta = json!({
        "config": result.config.to_json_value(),
        "mu_star": result.oracle.mu_star,
        "oracle_allocation": result.oracle.allocation,
        "base_seed": result.config.base_seed,
        "policy_seeds": seeds,
        "environment_seeds": environment_seeds,
        "seed_scheme": "splitmix64 fold of (base_seed, label bytes, label length, run_index); ChaCha8 streams, environment round t on stream t",
        "ci_method": CI_METHOD,
        "ci_level": 0.95,
        "smoothing_window": result.config.smoothing_window,
        "config_hash": result.provenance.config_hash,
        "software_version": result.provenance.software_version,
    });
    serde_json::to_writer_pretty(&mut *out, &meta)?;
    writeln!(out)
}
