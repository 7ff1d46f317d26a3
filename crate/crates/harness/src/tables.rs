//! Text tables over batch summaries.

use std::fmt::Write;

use safe_core::Algorithm;

use crate::batch::{BatchSummary, ExperimentSummary};

pub fn algorithm_title(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Standard => "Standard EA",
        Algorithm::Novelty => "Novelty Search",
        Algorithm::Safe => "SAFE",
        Algorithm::Random => "Random Search",
        Algorithm::FixedMix => "Fixed Mix",
    }
}

fn render(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(
        &mut out,
        &header.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
    );
    line(
        &mut out,
        &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
    );
    for r in rows {
        line(&mut out, r);
    }
    out
}

/// Algorithm, Maze, Success, Generations: mean (SD) generations to success,
/// `---` when no run succeeded.
pub fn maze_table(summary: &BatchSummary) -> String {
    let rows: Vec<Vec<String>> = summary
        .experiments
        .iter()
        .filter(|e| e.maze)
        .map(|e| {
            let s = &e.stats;
            let gens = match (s.mean_generations, s.sd_generations) {
                (Some(m), Some(sd)) => format!("{m:.1} ({sd:.1})"),
                _ => "---".into(),
            };
            vec![
                algorithm_title(e.algorithm).into(),
                e.domain.clone(),
                format!("{}/{}", s.success_count, s.run_count),
                gens,
            ]
        })
        .collect();
    render(&["Algorithm", "Maze", "Success", "Generations"], &rows)
}

/// Algorithm, Function, Best: mean (SD) of the best raw value per run.
pub fn function_table(summary: &BatchSummary) -> String {
    let rows: Vec<Vec<String>> = summary
        .experiments
        .iter()
        .filter(|e| !e.maze)
        .map(|e| {
            vec![
                algorithm_title(e.algorithm).into(),
                e.domain.clone(),
                format!("{:.4e} ({:.4e})", e.stats.mean_best, e.stats.sd_best),
            ]
        })
        .collect();
    render(&["Algorithm", "Function", "Best"], &rows)
}

/// SAFE coefficient rows: mean (SD) of a and b over successful runs.
pub fn coefficient_table(summary: &BatchSummary) -> String {
    let fmt = |m: Option<f64>, sd: Option<f64>| match (m, sd) {
        (Some(m), Some(sd)) => format!("{m:.3} ({sd:.3})"),
        _ => "---".into(),
    };
    let rows: Vec<Vec<String>> = summary
        .experiments
        .iter()
        .filter(|e| e.algorithm == Algorithm::Safe)
        .map(|e: &ExperimentSummary| {
            vec![
                e.label.clone(),
                e.domain.clone(),
                fmt(e.stats.mean_a, e.stats.sd_a),
                fmt(e.stats.mean_b, e.stats.sd_b),
            ]
        })
        .collect();
    render(&["Experiment", "Domain", "a", "b"], &rows)
}

/// Controller weights p1..p16: one row per gene, one mean (SD) column per
/// maze experiment with successful runs.
pub fn controller_table(summary: &BatchSummary) -> String {
    let cols: Vec<(&ExperimentSummary, &[f64], &[f64])> = summary
        .experiments
        .iter()
        .filter_map(|e| match (&e.stats.per_gene_mean, &e.stats.per_gene_sd) {
            (Some(m), Some(sd)) if e.maze => Some((e, m.as_slice(), sd.as_slice())),
            _ => None,
        })
        .collect();
    let genes = cols.iter().map(|c| c.1.len()).max().unwrap_or(0);
    let rows: Vec<Vec<String>> = (0..genes)
        .map(|i| {
            let mut row = vec![format!("p{}", i + 1)];
            row.extend(cols.iter().map(|(_, m, sd)| match (m.get(i), sd.get(i)) {
                (Some(m), Some(sd)) => format!("{m:.2} ({sd:.2})"),
                _ => "---".into(),
            }));
            row
        })
        .collect();
    let mut header = vec!["Gene"];
    header.extend(cols.iter().map(|c| c.0.label.as_str()));
    render(&header, &rows)
}

/// All tables that have at least one row.
pub fn all_tables(summary: &BatchSummary) -> String {
    let mut out = String::new();
    if summary.experiments.iter().any(|e| e.maze) {
        out.push_str(&maze_table(summary));
    }
    if summary.experiments.iter().any(|e| !e.maze) {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&function_table(summary));
    }
    if summary
        .experiments
        .iter()
        .any(|e| e.algorithm == Algorithm::Safe)
    {
        out.push('\n');
        out.push_str(&coefficient_table(summary));
    }
    if summary
        .experiments
        .iter()
        .any(|e| e.maze && e.stats.per_gene_mean.is_some())
    {
        out.push('\n');
        out.push_str(&controller_table(summary));
    }
    out
}
