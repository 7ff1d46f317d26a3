//! CSV formats: runs, telemetry, novelty archives and trajectories.

use std::io::{BufRead, Read, Write};

use safe_core::maze::{Position, Trajectory};
use safe_core::novelty::{BehaviorPoint, NoveltyArchive};
use safe_core::runners::GenerationRecord;

use crate::error::{HarnessError, Result};
use crate::stats::RunRow;

pub const RUNS_SCHEMA: &str = "#schema safe-runs/1";

pub fn write_runs<W: Write>(mut out: W, rows: &[RunRow]) -> Result<()> {
    writeln!(out, "{RUNS_SCHEMA}").map_err(|e| HarnessError::io("runs.csv", e))?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| HarnessError::io("runs.csv", e))?;
    Ok(())
}

pub fn read_runs<R: BufRead>(mut input: R) -> Result<Vec<RunRow>> {
    let mut first = String::new();
    input
        .read_line(&mut first)
        .map_err(|e| HarnessError::io("runs.csv", e))?;
    if first.trim_end() != RUNS_SCHEMA {
        return Err(HarnessError::Format {
            what: "runs.csv",
            detail: format!(
                "expected {RUNS_SCHEMA:?} on the first line, found {:?}",
                first.trim_end()
            ),
        });
    }
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

/// `label,seed,generation,best_raw,best_raw_so_far,best_fitness,mean_a,mean_b`
pub fn write_telemetry<W: Write>(
    w: &mut csv::Writer<W>,
    label: &str,
    seed: u64,
    records: &[GenerationRecord],
) -> Result<()> {
    for t in records {
        w.write_record([
            label.to_owned(),
            seed.to_string(),
            t.generation.to_string(),
            t.best_raw.to_string(),
            t.best_raw_so_far.to_string(),
            t.best_fitness.to_string(),
            t.mean_a.map(|v| v.to_string()).unwrap_or_default(),
            t.mean_b.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    Ok(())
}

pub fn telemetry_writer<W: Write>(out: W) -> Result<csv::Writer<W>> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "label",
        "seed",
        "generation",
        "best_raw",
        "best_raw_so_far",
        "best_fitness",
        "mean_a",
        "mean_b",
    ])?;
    Ok(w)
}

/// One row per entry in insertion order: coordinates then emergence score.
pub fn write_archive<W: Write>(out: W, archive: &NoveltyArchive) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for e in archive.entries_by_insertion() {
        let mut rec: Vec<String> = e.point.coords().iter().map(|c| c.to_string()).collect();
        rec.push(e.emergence_score.to_string());
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| HarnessError::io("archive", e))?;
    Ok(())
}

pub fn read_archive<R: Read>(input: R, capacity: usize) -> Result<NoveltyArchive> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut entries = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let values = rec
            .iter()
            .map(|f| {
                f.trim().parse::<f64>().map_err(|e| HarnessError::Format {
                    what: "archive",
                    detail: format!("{f:?}: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let Some((&score, coords)) = values.split_last() else {
            continue;
        };
        if coords.is_empty() {
            return Err(HarnessError::Format {
                what: "archive",
                detail: "row has no coordinates".into(),
            });
        }
        entries.push((BehaviorPoint::new(coords.to_vec()), score));
    }
    NoveltyArchive::restore(capacity, entries).map_err(|e| safe_core::Error::from(e).into())
}

pub fn write_trajectory<W: Write>(mut out: W, t: &Trajectory) -> Result<()> {
    out.write_all(safe_core::maze::trajectory_csv(t).as_bytes())
        .map_err(|e| HarnessError::io("trajectory", e))
}

/// Reads a `col,row` path.
pub fn read_path<R: Read>(input: R) -> Result<Vec<Position>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<(usize, usize)>()
        .map(|rec| {
            let (col, row) = rec?;
            Ok(Position::new(col, row))
        })
        .collect()
}
