//! Command-line interface.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use dbs_core::{Policy, SimConfig};

use crate::config_file::parse_config;
use crate::error::SimError;
use crate::experiment::{cmd_compare, cmd_run, cmd_sweep, ExperimentSpec};
use crate::format::sig6;

#[derive(Debug, Parser)]
#[command(name = "dbs-sim", version, about = "Drone base station mobility simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Feedback,
    Randomwalk,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::Feedback => Policy::Feedback,
            PolicyArg::Randomwalk => Policy::RandomWalk,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicySet {
    Both,
    Feedback,
    Randomwalk,
}

impl PolicySet {
    fn policies(self) -> Vec<Policy> {
        match self {
            PolicySet::Both => Policy::ALL.to_vec(),
            PolicySet::Feedback => vec![Policy::Feedback],
            PolicySet::Randomwalk => vec![Policy::RandomWalk],
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write timeseries.csv, summary.csv, run_meta.txt.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides `seed` from the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `policy` from the config file.
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
    /// Sweep drone counts, seeds and policies; write sweep.csv, aggregate.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated drone counts, e.g. `5,10,15,20`.
        #[arg(long, value_parser = parse_drones)]
        drones: DroneList,
        /// A count `N` (seeds 0..N) or a comma-separated list, e.g. `3,7`
        /// (a single explicit seed needs a trailing comma: `7,`).
        #[arg(long, value_parser = parse_seeds, default_value = "10")]
        seeds: SeedList,
        #[arg(long, value_enum, default_value = "both")]
        policies: PolicySet,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run both policies on the same seed; write compare.csv and verdict.txt.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone)]
struct DroneList(Vec<usize>);

#[derive(Debug, Clone)]
struct SeedList(Vec<u64>);

fn parse_drones(s: &str) -> Result<DroneList, String> {
    let v = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty drone list".into());
    }
    Ok(DroneList(v))
}

pub fn parse_seeds_arg(s: &str) -> Result<Vec<u64>, String> {
    if s.contains(',') {
        let v = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<u64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty seed list".into());
        }
        Ok(v)
    } else {
        let n: u64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
        if n == 0 {
            return Err("seed count must be at least 1".into());
        }
        Ok((0..n).collect())
    }
}

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    parse_seeds_arg(s).map(SeedList)
}

fn load_config(path: &Path) -> Result<SimConfig, SimError> {
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    parse_config(&text).map_err(|source| SimError::Config {
        path: path.to_path_buf(),
        source,
    })
}

fn execute(command: Command) -> Result<(), SimError> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            policy,
        } => {
            let mut base = load_config(&config)?;
            if let Some(seed) = seed {
                base.seed = seed;
            }
            if let Some(p) = policy {
                base.policy = p.into();
            }
            let report = cmd_run(&ExperimentSpec::single(base, out.clone()))?;
            println!(
                "avg_connectivity={} trend_slope={} out={}",
                sig6(report.summary.avg_connectivity),
                sig6(report.summary.trend_slope),
                out.display()
            );
        }
        Command::Sweep {
            config,
            drones,
            seeds,
            policies,
            out,
        } => {
            let spec = ExperimentSpec {
                base: load_config(&config)?,
                drone_counts: drones.0,
                seeds: seeds.0,
                policies: policies.policies(),
                out_dir: out,
            };
            for row in cmd_sweep(&spec)? {
                println!(
                    "n_d={} policy={} mean={} min={} max={}",
                    row.n_d,
                    row.policy,
                    sig6(row.mean),
                    sig6(row.min),
                    sig6(row.max)
                );
            }
        }
        Command::Compare { config, out } => {
            let base = load_config(&config)?;
            let spec = ExperimentSpec {
                drone_counts: vec![base.n_d],
                seeds: vec![base.seed],
                policies: Policy::ALL.to_vec(),
                out_dir: out,
                base,
            };
            println!("{}", cmd_compare(&spec)?.line());
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code: 0 on success, 1 on invalid input, 2 on
/// IO failure.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
