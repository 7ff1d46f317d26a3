//! Per-run rows and batch statistics.

use safe_core::RunResult;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// One line of `runs.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub label: String,
    pub seed: u64,
    pub success: bool,
    /// Generation of first success, empty when the run failed.
    pub generations: Option<usize>,
    pub best_raw: f64,
    pub a_mean: Option<f64>,
    pub b_mean: Option<f64>,
    pub evaluations: u64,
    /// Best genome, space separated.
    pub genome: String,
}

impl RunRow {
    pub fn from_result(label: &str, r: &RunResult) -> Self {
        Self {
            label: label.to_owned(),
            seed: r.seed,
            success: r.success,
            generations: r.generations_to_success,
            best_raw: r.best_raw_objective,
            a_mean: r.success_objective.map(|(a, _)| a),
            b_mean: r.success_objective.map(|(_, b)| b),
            evaluations: r.evaluations,
            genome: r
                .best_genome
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }

    pub fn genes(&self) -> Result<Vec<f64>> {
        self.genome
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|e| HarnessError::Format {
                    what: "genome",
                    detail: format!("{t:?}: {e}"),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub success_count: usize,
    pub run_count: usize,
    pub mean_generations: Option<f64>,
    pub sd_generations: Option<f64>,
    pub mean_best: f64,
    pub sd_best: f64,
    pub per_gene_mean: Option<Vec<f64>>,
    pub per_gene_sd: Option<Vec<f64>>,
    pub mean_a: Option<f64>,
    pub mean_b: Option<f64>,
    pub sd_a: Option<f64>,
    pub sd_b: Option<f64>,
}

/// Mean and sample standard deviation. Values are summed in sorted order so
/// the result does not depend on input order. SD is 0 for a single value.
pub fn mean_sd(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return Some((mean, 0.0));
    }
    let mut sq: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    sq.sort_by(f64::total_cmp);
    Some((mean, (sq.iter().sum::<f64>() / (n - 1.0)).sqrt()))
}

/// Aggregates run rows. Per-gene statistics are computed over successful
/// runs when `controllers` is set (maze domains).
pub fn summarize_rows(rows: &[RunRow], controllers: bool) -> Result<BatchStats> {
    if rows.is_empty() {
        return Err(HarnessError::Spec("cannot summarize zero runs".into()));
    }
    let successes: Vec<&RunRow> = rows.iter().filter(|r| r.success).collect();
    let gens: Vec<f64> = successes
        .iter()
        .filter_map(|r| r.generations.map(|g| g as f64))
        .collect();
    let best: Vec<f64> = rows.iter().map(|r| r.best_raw).collect();
    let (mean_best, sd_best) = mean_sd(&best).expect("nonempty");
    let gen_stats = mean_sd(&gens);

    let (per_gene_mean, per_gene_sd) = if controllers && !successes.is_empty() {
        let genomes = successes
            .iter()
            .map(|r| r.genes())
            .collect::<Result<Vec<_>>>()?;
        let len = genomes[0].len();
        if genomes.iter().any(|g| g.len() != len) {
            return Err(HarnessError::Format {
                what: "genome",
                detail: "successful genomes differ in length".into(),
            });
        }
        let (m, s): (Vec<f64>, Vec<f64>) = (0..len)
            .map(|i| {
                let col: Vec<f64> = genomes.iter().map(|g| g[i]).collect();
                mean_sd(&col).expect("nonempty")
            })
            .unzip();
        (Some(m), Some(s))
    } else {
        (None, None)
    };

    let a: Vec<f64> = successes.iter().filter_map(|r| r.a_mean).collect();
    let b: Vec<f64> = successes.iter().filter_map(|r| r.b_mean).collect();
    let a_stats = mean_sd(&a);
    let b_stats = mean_sd(&b);

    Ok(BatchStats {
        success_count: successes.len(),
        run_count: rows.len(),
        mean_generations: gen_stats.map(|s| s.0),
        sd_generations: gen_stats.map(|s| s.1),
        mean_best,
        sd_best,
        per_gene_mean,
        per_gene_sd,
        mean_a: a_stats.map(|s| s.0),
        mean_b: b_stats.map(|s| s.0),
        sd_a: a_stats.map(|s| s.1),
        sd_b: b_stats.map(|s| s.1),
    })
}

pub fn summarize(results: &[RunResult], controllers: bool) -> Result<BatchStats> {
    let rows: Vec<RunRow> = results.iter().map(|r| RunRow::from_result("", r)).collect();
    summarize_rows(&rows, controllers)
}
