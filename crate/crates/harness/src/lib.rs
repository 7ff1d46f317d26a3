//! Experiment harness for `safe-core`: TOML experiment specs, parallel
//! batches, summary statistics, CSV/JSON output, result tables and SVG
//! path rendering. The `safe` binary wraps all of it.

pub mod batch;
pub mod config;
mod error;
pub mod io;
pub mod mazes;
pub mod stats;
pub mod svg;
pub mod tables;

pub use batch::{run_batch, BatchSummary, ExperimentSummary};
pub use config::{Domain, Experiment, ExperimentSpec, Overrides};
pub use error::{HarnessError, Result};
pub use stats::{summarize, summarize_rows, BatchStats, RunRow};
pub use svg::render_trajectory_svg;
