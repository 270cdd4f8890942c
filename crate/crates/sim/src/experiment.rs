//! Experiment orchestration and artifact emission.

use std::fs;
use std::path::{Path, PathBuf};

use dbs_core::{run, summarize, Policy, RunResult, RunSummary, SimConfig};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config_file::render_config;
use crate::error::SimError;
use crate::format::sig6;

pub const TIMESERIES_HEADER: [&str; 3] = ["t", "drone_id", "m"];
pub const SUMMARY_HEADER: [&str; 5] = ["drone_id", "mean_m", "min_m", "max_m", "final_m"];
pub const SWEEP_HEADER: [&str; 4] = ["n_d", "seed", "policy", "avg_connectivity"];
pub const AGGREGATE_HEADER: [&str; 5] = [
    "n_d",
    "policy",
    "mean_avg_connectivity",
    "min_avg_connectivity",
    "max_avg_connectivity",
];
pub const COMPARE_HEADER: [&str; 3] = ["t", "mean_m_feedback", "mean_m_randomwalk"];

pub const RUN_META: &str = "run_meta.txt";

/// A grid of runs sharing one base scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub base: SimConfig,
    /// Values of `n_d` to sweep.
    pub drone_counts: Vec<usize>,
    pub seeds: Vec<u64>,
    pub policies: Vec<Policy>,
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    /// A spec describing exactly one run of `base`.
    pub fn single(base: SimConfig, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            drone_counts: vec![base.n_d],
            seeds: vec![base.seed],
            policies: vec![base.policy],
            out_dir: out_dir.into(),
            base,
        }
    }

    /// The configuration of one grid cell.
    pub fn cell(&self, n_d: usize, seed: u64, policy: Policy) -> SimConfig {
        SimConfig {
            n_d,
            seed,
            policy,
            ..self.base.clone()
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.drone_counts.is_empty() {
            return Err(SimError::Usage("no drone counts given".into()));
        }
        if self.seeds.is_empty() {
            return Err(SimError::Usage("no seeds given".into()));
        }
        if self.policies.is_empty() {
            return Err(SimError::Usage("no policies given".into()));
        }
        for &n_d in &self.drone_counts {
            self.cell(n_d, self.seeds[0], self.policies[0]).validate()?;
        }
        Ok(())
    }

    /// Canonical text of the whole experiment, used for hashing.
    fn canonical(&self, command: &str) -> String {
        let list = |v: Vec<String>| v.join(",");
        format!(
            "command = {command}\ndrones = {}\nseeds = {}\npolicies = {}\n{}",
            list(self.drone_counts.iter().map(ToString::to_string).collect()),
            list(self.seeds.iter().map(ToString::to_string).collect()),
            list(self.policies.iter().map(ToString::to_string).collect()),
            render_config(&self.base),
        )
    }
}

/// Writes `run_meta.txt`: the resolved base configuration in config-file
/// syntax (loadable with `--config`), preceded by comment lines carrying
/// the experiment axes, the command that reproduces the artifacts, and a
/// SHA-256 of the canonical experiment text.
fn write_meta(spec: &ExperimentSpec, command: &str, reproduce: &str, extra: &[(&str, String)]) -> Result<(), SimError> {
    let hash = hex::encode(Sha256::digest(spec.canonical(command).as_bytes()));
    let mut text = String::new();
    text.push_str("# dbs-sim run metadata\n");
    text.push_str(&format!("# command = {command}\n"));
    text.push_str(&format!("# reproduce = dbs-sim {reproduce}\n"));
    text.push_str(&format!("# spec_sha256 = {hash}\n"));
    for (k, v) in extra {
        text.push_str(&format!("# {k} = {v}\n"));
    }
    text.push_str(&render_config(&spec.base));
    write_file(&spec.out_dir.join(RUN_META), text.as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), SimError> {
    fs::write(path, bytes).map_err(|e| SimError::io(path, e))
}

fn create_out_dir(dir: &Path) -> Result<(), SimError> {
    fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))
}

fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<(), SimError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| SimError::csv(path, e))?;
    w.write_record(header).map_err(|e| SimError::csv(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| SimError::csv(path, e))?;
    }
    w.flush().map_err(|e| SimError::io(path, e))
}

fn run_and_summarize(cfg: &SimConfig) -> Result<(RunResult, RunSummary), SimError> {
    let result = run(cfg)?;
    let summary = summarize(&result.traces).expect("validated runs have at least one tick");
    Ok((result, summary))
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub summary: RunSummary,
}

/// Single run: `timeseries.csv`, `summary.csv`, `run_meta.txt`.
pub fn cmd_run(spec: &ExperimentSpec) -> Result<RunReport, SimError> {
    if spec.seeds.len() != 1 || spec.policies.len() != 1 || spec.drone_counts.len() != 1 {
        return Err(SimError::Usage("run takes exactly one seed, policy and drone count".into()));
    }
    spec.validate()?;
    let cfg = spec.cell(spec.drone_counts[0], spec.seeds[0], spec.policies[0]);
    let (result, summary) = run_and_summarize(&cfg)?;

    let dir = &spec.out_dir;
    create_out_dir(dir)?;
    let rows = result.traces.iter().flat_map(|tr| {
        tr.per_drone_m
            .iter()
            .enumerate()
            .map(move |(i, m)| vec![tr.t.to_string(), i.to_string(), m.to_string()])
    });
    write_csv(&dir.join("timeseries.csv"), &TIMESERIES_HEADER, rows)?;
    let rows = summary.per_drone.iter().map(|s| {
        vec![
            s.drone_id.to_string(),
            sig6(s.mean_m),
            s.min_m.to_string(),
            s.max_m.to_string(),
            s.final_m.to_string(),
        ]
    });
    write_csv(&dir.join("summary.csv"), &SUMMARY_HEADER, rows)?;
    let single = ExperimentSpec::single(cfg, dir.clone());
    write_meta(
        &single,
        "run",
        &format!("run --config {RUN_META}"),
        &[
            ("avg_connectivity", sig6(summary.avg_connectivity)),
            ("trend_slope", sig6(summary.trend_slope)),
        ],
    )?;
    Ok(RunReport { summary })
}

/// One row of `sweep.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub n_d: usize,
    pub seed: u64,
    pub policy: Policy,
    pub avg_connectivity: f64,
}

/// One row of `aggregate.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub n_d: usize,
    pub policy: Policy,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Runs every `(n_d, seed, policy)` cell, in parallel, returning results in
/// grid order.
pub fn run_grid(spec: &ExperimentSpec) -> Result<Vec<SweepCell>, SimError> {
    spec.validate()?;
    let mut cells = Vec::new();
    for &n_d in &spec.drone_counts {
        for &seed in &spec.seeds {
            for &policy in &spec.policies {
                cells.push((n_d, seed, policy));
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(n_d, seed, policy)| {
            let (_, summary) = run_and_summarize(&spec.cell(n_d, seed, policy))?;
            Ok(SweepCell {
                n_d,
                seed,
                policy,
                avg_connectivity: summary.avg_connectivity,
            })
        })
        .collect()
}

/// Per `(n_d, policy)` mean, min and max over seeds, in grid order.
pub fn aggregate(spec: &ExperimentSpec, cells: &[SweepCell]) -> Vec<AggregateRow> {
    let mut rows = Vec::new();
    for &n_d in &spec.drone_counts {
        for &policy in &spec.policies {
            let vals: Vec<f64> = cells
                .iter()
                .filter(|c| c.n_d == n_d && c.policy == policy)
                .map(|c| c.avg_connectivity)
                .collect();
            if vals.is_empty() {
                continue;
            }
            rows.push(AggregateRow {
                n_d,
                policy,
                mean: vals.iter().sum::<f64>() / vals.len() as f64,
                min: vals.iter().copied().fold(f64::INFINITY, f64::min),
                max: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    rows
}

/// Sweep over drone counts, seeds and policies: `sweep.csv`,
/// `aggregate.csv`, `run_meta.txt`.
pub fn cmd_sweep(spec: &ExperimentSpec) -> Result<Vec<AggregateRow>, SimError> {
    let cells = run_grid(spec)?;
    let agg = aggregate(spec, &cells);

    let dir = &spec.out_dir;
    create_out_dir(dir)?;
    let rows = cells.iter().map(|c| {
        vec![
            c.n_d.to_string(),
            c.seed.to_string(),
            c.policy.to_string(),
            sig6(c.avg_connectivity),
        ]
    });
    write_csv(&dir.join("sweep.csv"), &SWEEP_HEADER, rows)?;
    let rows = agg.iter().map(|a| {
        vec![
            a.n_d.to_string(),
            a.policy.to_string(),
            sig6(a.mean),
            sig6(a.min),
            sig6(a.max),
        ]
    });
    write_csv(&dir.join("aggregate.csv"), &AGGREGATE_HEADER, rows)?;
    let policies = match spec.policies.as_slice() {
        [Policy::Feedback, Policy::RandomWalk] => "both".to_string(),
        _ => list(&spec.policies),
    };
    write_meta(
        spec,
        "sweep",
        &format!(
            "sweep --config {RUN_META} --drones {} --seeds {}, --policies {policies} --out <dir>",
            list(&spec.drone_counts),
            list(&spec.seeds),
        ),
        &[
            ("drones", list(&spec.drone_counts)),
            ("seeds", list(&spec.seeds)),
            ("trials", spec.seeds.len().to_string()),
            ("policies", list(&spec.policies)),
        ],
    )?;
    Ok(agg)
}

/// Outcome of a feedback-versus-baseline comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub seed: u64,
    pub avg_feedback: f64,
    pub avg_randomwalk: f64,
    pub slope_feedback: f64,
    pub slope_randomwalk: f64,
}

impl Verdict {
    pub fn feedback_better(&self) -> bool {
        self.avg_feedback > self.avg_randomwalk
    }

    pub fn line(&self) -> String {
        format!(
            "avg_connectivity_feedback={} avg_connectivity_randomwalk={} trend_slope_feedback={} trend_slope_randomwalk={} feedback_better={}",
            sig6(self.avg_feedback),
            sig6(self.avg_randomwalk),
            sig6(self.slope_feedback),
            sig6(self.slope_randomwalk),
            self.feedback_better()
        )
    }
}

/// Both policies on the base scenario with the same seed: `compare.csv`,
/// `verdict.txt`, `run_meta.txt`.
pub fn cmd_compare(spec: &ExperimentSpec) -> Result<Verdict, SimError> {
    if !(spec.policies.contains(&Policy::Feedback) && spec.policies.contains(&Policy::RandomWalk)) {
        return Err(SimError::Usage("compare needs both policies".into()));
    }
    spec.validate()?;
    let seed = spec.base.seed;
    let n_d = spec.base.n_d;
    let fb_cfg = spec.cell(n_d, seed, Policy::Feedback);
    let rw_cfg = spec.cell(n_d, seed, Policy::RandomWalk);
    assert_eq!(fb_cfg.seed, rw_cfg.seed);
    let (fb, rw) = rayon::join(|| run_and_summarize(&fb_cfg), || run_and_summarize(&rw_cfg));
    let ((_, fb), (_, rw)) = (fb?, rw?);

    let dir = &spec.out_dir;
    create_out_dir(dir)?;
    let rows = fb
        .mean_m_timeseries
        .iter()
        .zip(&rw.mean_m_timeseries)
        .enumerate()
        .map(|(t, (a, b))| vec![t.to_string(), sig6(*a), sig6(*b)]);
    write_csv(&dir.join("compare.csv"), &COMPARE_HEADER, rows)?;
    let verdict = Verdict {
        seed,
        avg_feedback: fb.avg_connectivity,
        avg_randomwalk: rw.avg_connectivity,
        slope_feedback: fb.trend_slope,
        slope_randomwalk: rw.trend_slope,
    };
    write_file(&dir.join("verdict.txt"), format!("{}\n", verdict.line()).as_bytes())?;
    write_meta(
        spec,
        "compare",
        &format!("compare --config {RUN_META} --out <dir>"),
        &[
            ("seed_feedback", fb_cfg.seed.to_string()),
            ("seed_randomwalk", rw_cfg.seed.to_string()),
            ("seeds_identical", "true".to_string()),
        ],
    )?;
    Ok(verdict)
}
