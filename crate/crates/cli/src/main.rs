//! `coopbandit` command-line interface.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use coopbandit::experiment::{run_experiment, write_results, ExperimentConfig, ExperimentResult};
use coopbandit::policies::oracle_allocation;

/// Environment variable capping the number of worker threads.
const THREADS_VAR: &str = "COOPBANDIT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "coopbandit",
    version,
    about = "Cooperative threshold-bandit experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every configured policy and write result files.
    ///
    /// Worker threads can be capped with the COOPBANDIT_THREADS environment
    /// variable.
    Run {
        #[command(flatten)]
        source: ConfigSource,
        /// Directory for timeseries.csv, allocations.csv, aggregates.csv and meta.json.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Print the optimal allocation and its expected reward.
    Oracle {
        #[command(flatten)]
        source: ConfigSource,
    },
    /// Check a config and print it with every default filled in.
    Validate {
        #[command(flatten)]
        source: ConfigSource,
    },
}

#[derive(Debug, Args)]
struct ConfigSource {
    /// Experiment config file (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Override a scalar setting: horizon, runs, seed or m. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigSource {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::load(&self.config)?;
        for assignment in &self.overrides {
            config
                .apply_override(assignment)
                .with_context(|| format!("bad --override {assignment}"))?;
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { source, out } => cmd_run(&source.load()?, &out),
        Command::Oracle { source } => {
            let config = source.load()?;
            let sol = oracle_allocation(&config.environment, config.oracle_max_allocations)?;
            println!("allocation: {:?}", sol.allocation);
            println!("mu_star: {:?}", sol.mu_star);
            Ok(())
        }
        Command::Validate { source } => {
            print!("{}", source.load()?.to_toml());
            Ok(())
        }
    }
}

fn cmd_run(config: &ExperimentConfig, out: &Path) -> Result<()> {
    eprintln!(
        "running {} policies x {} runs x {} rounds",
        config.policies.len(),
        config.num_runs,
        config.horizon
    );
    let result = with_thread_cap(std::env::var(THREADS_VAR).ok().as_deref(), || {
        run_experiment(config)
    })??;
    write_results(&result, out)?;
    print!("{}", summary_table(&result));
    eprintln!("results written to {}", out.display());
    Ok(())
}

fn parse_thread_cap(value: Option<&str>) -> Result<Option<usize>> {
    let Some(raw) = value.map(str::trim).filter(|v| !v.is_empty()) else {
        return Ok(None);
    };
    match raw.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Some(n)),
        _ => bail!("{THREADS_VAR} must be a positive integer, got `{raw}`"),
    }
}

#[cfg(feature = "parallel")]
fn with_thread_cap<T: Send>(value: Option<&str>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match parse_thread_cap(value)? {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("failed to start worker threads")?;
            Ok(pool.install(job))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_thread_cap<T: Send>(value: Option<&str>, job: impl FnOnce() -> T + Send) -> Result<T> {
    parse_thread_cap(value)?;
    Ok(job())
}

/// Final cumulative reward per policy, in config order.
fn summary_table(result: &ExperimentResult) -> String {
    let horizon = result.config.horizon;
    let mut out = format!(
        "final cumulative reward after {horizon} rounds, {} runs (mean +/- 95% CI)\n",
        result.config.num_runs
    );
    out += &format!(
        "{:<18} {:>14} {:>12} {:>10}\n",
        "policy", "mean", "ci", "per round"
    );
    for kind in &result.config.policies {
        let Some(p) = result.policy(*kind) else {
            continue;
        };
        let (mean, ci) = p.aggregates.cumulative_reward.last();
        out += &format!(
            "{:<18} {:>14.1} {:>12.1} {:>10.3}\n",
            kind.name(),
            mean,
            ci,
            mean / horizon as f64
        );
    }
    out += &format!(
        "optimum: mu* = {} per round, {:.1} in total\n",
        result.oracle.mu_star,
        result.oracle.mu_star * horizon as f64
    );
    out
}
