//! Batch execution and persistence.
//!
//! A batch writes three files to its output directory: `runs.csv` (one row
//! per run), `telemetry.csv` (one row per run and generation) and
//! `summary.json`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use safe_core::rng::derive_seed;
use safe_core::runners::run;
use safe_core::{Algorithm, RunResult};
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, ExperimentSpec};
use crate::error::{HarnessError, Result};
use crate::io;
use crate::stats::{summarize_rows, BatchStats, RunRow};

pub const SUMMARY_FILE: &str = "summary.json";
pub const RUNS_FILE: &str = "runs.csv";
pub const TELEMETRY_FILE: &str = "telemetry.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub label: String,
    pub algorithm: Algorithm,
    pub domain: String,
    pub maze: bool,
    pub runs: usize,
    pub stats: BatchStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub batch_seed: u64,
    pub experiments: Vec<ExperimentSummary>,
}

/// Runs of one experiment, in run-index order. Run `i` uses seed
/// `derive_seed(batch_seed, i)`.
pub fn run_experiment(exp: &Experiment, batch_seed: u64) -> Result<Vec<RunResult>> {
    let adapter = exp.domain.adapter();
    (0..exp.runs)
        .into_par_iter()
        .map(|i| {
            let cfg = exp.run_config(derive_seed(batch_seed, i as u64));
            run(&cfg, adapter.as_ref()).map_err(HarnessError::from)
        })
        .collect()
}

pub fn experiment_summary(exp: &Experiment, rows: &[RunRow]) -> Result<ExperimentSummary> {
    Ok(ExperimentSummary {
        label: exp.label.clone(),
        algorithm: exp.algorithm,
        domain: exp.domain.label(),
        maze: exp.domain.is_maze(),
        runs: exp.runs,
        stats: summarize_rows(rows, exp.domain.is_maze())?,
    })
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| HarnessError::io(path, e))
}

/// Runs every experiment and writes the batch files to `spec.output`.
/// The output directory is created and checked before any run starts.
pub fn run_batch(spec: &ExperimentSpec) -> Result<BatchSummary> {
    let dir = &spec.output;
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut runs_out = create(dir, RUNS_FILE)?;
    let mut telemetry = io::telemetry_writer(create(dir, TELEMETRY_FILE)?)?;
    let mut summary_out = create(dir, SUMMARY_FILE)?;

    let mut all_rows = Vec::new();
    let mut experiments = Vec::new();
    for exp in &spec.experiments {
        let results = run_experiment(exp, spec.batch_seed)?;
        let rows: Vec<RunRow> = results
            .iter()
            .map(|r| RunRow::from_result(&exp.label, r))
            .collect();
        for r in &results {
            io::write_telemetry(&mut telemetry, &exp.label, r.seed, &r.telemetry)?;
        }
        experiments.push(experiment_summary(exp, &rows)?);
        all_rows.extend(rows);
    }

    io::write_runs(&mut runs_out, &all_rows)?;
    runs_out
        .flush()
        .map_err(|e| HarnessError::io(dir.join(RUNS_FILE), e))?;
    telemetry
        .flush()
        .map_err(|e| HarnessError::io(dir.join(TELEMETRY_FILE), e))?;
    let summary = BatchSummary {
        batch_seed: spec.batch_seed,
        experiments,
    };
    serde_json::to_writer_pretty(&mut summary_out, &summary)?;
    summary_out
        .write_all(b"\n")
        .and_then(|_| summary_out.flush())
        .map_err(|e| HarnessError::io(dir.join(SUMMARY_FILE), e))?;
    Ok(summary)
}

pub fn read_summary(dir: &Path) -> Result<BatchSummary> {
    let path = dir.join(SUMMARY_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_runs(dir: &Path) -> Result<Vec<RunRow>> {
    let path = dir.join(RUNS_FILE);
    let f = File::open(&path).map_err(|e| HarnessError::io(&path, e))?;
    io::read_runs(std::io::BufReader::new(f))
}
