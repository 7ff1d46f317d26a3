use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use safe_core::maze::parse_maze;
use safe_core::runners::run;
use safe_core::{Algorithm, RunResult};
use safe_harness::batch::{self, run_batch};
use safe_harness::config::{Domain, ExperimentSpec, Overrides};
use safe_harness::{io, mazes, render_trajectory_svg, tables};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "safe",
    version,
    about = "SAFE, novelty search and baseline EAs on mazes and benchmark functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one search and print its outcome.
    Run(RunArgs),
    /// Run every experiment in a TOML spec.
    Batch(BatchArgs),
    /// Draw the best path of a saved maze run as SVG.
    Render(RenderArgs),
    /// Print result tables for a finished batch.
    Tables(TablesArgs),
}

#[derive(Args)]
struct Budget {
    /// Generations per run.
    #[arg(long)]
    generations: Option<usize>,
    /// Solution population size.
    #[arg(long)]
    pop_size: Option<usize>,
}

impl Budget {
    fn overrides(&self) -> Overrides {
        Overrides {
            generations: self.generations,
            pop_size: self.pop_size,
            ..Overrides::default()
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// standard, novelty, safe, random or fixed-mix.
    #[arg(long)]
    algo: Algorithm,
    /// Maze file, or maze1/maze2 for the bundled mazes.
    #[arg(
        long,
        conflicts_with = "function",
        required_unless_present = "function"
    )]
    maze: Option<String>,
    /// rastrigin, rosenbrock or cigar.
    #[arg(long, requires = "dim")]
    function: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    budget: Budget,
    /// Directory for run.json, telemetry.csv and (mazes) trajectory.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// Experiment spec (TOML).
    spec: PathBuf,
    /// Overrides every experiment's run count.
    #[arg(long)]
    runs: Option<usize>,
    /// Overrides the batch seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    budget: Budget,
    /// Overrides the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// A run.json written by `safe run --out`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Maze to draw on instead of the one stored in the log.
    #[arg(long)]
    maze: Option<String>,
    /// SVG file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TablesArgs {
    /// Batch output directory.
    #[arg(long = "in")]
    input: PathBuf,
}

/// Contents of run.json.
#[derive(Serialize, Deserialize)]
struct RunLog {
    maze: Option<String>,
    result: RunResult,
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let (domain, maze_text) = match (&a.maze, &a.function) {
        (Some(m), None) => (
            Domain::maze(m, None)?,
            Some(mazes::load_maze_text(m, None)?),
        ),
        (None, Some(f)) => (
            Domain::function(f, a.dim.context("--function needs --dim")?)?,
            None,
        ),
        _ => bail!("give exactly one of --maze or --function"),
    };
    let mut cfg = domain.run_config(a.algo, a.seed);
    a.budget.overrides().apply(&mut cfg);
    let adapter = domain.adapter();
    let r = run(&cfg, adapter.as_ref())?;

    println!("algorithm: {}", r.algorithm);
    println!("domain: {}", r.domain);
    println!("seed: {}", r.seed);
    println!("success: {}", r.success);
    if domain.is_maze() {
        println!("best_dist_to_goal: {}", r.best_raw_objective);
    } else {
        println!("best_value: {:e}", r.best_raw_objective);
    }
    match r.generations_to_success {
        Some(g) => println!("generations_to_success: {g}"),
        None => println!("generations_to_success: ---"),
    }
    println!("generations_executed: {}", r.generations_executed);
    println!("evaluations: {}", r.evaluations);
    if let Some((ma, mb)) = r.success_objective {
        println!("objective_a: {ma}");
        println!("objective_b: {mb}");
    }

    if let Some(dir) = a.out {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tw = io::telemetry_writer(Vec::new())?;
        io::write_telemetry(&mut tw, &r.domain, r.seed, &r.telemetry)?;
        write(&dir.join("telemetry.csv"), &tw.into_inner()?)?;
        if let Some(t) = &r.best_trajectory {
            let mut buf = Vec::new();
            io::write_trajectory(&mut buf, t)?;
            write(&dir.join("trajectory.csv"), &buf)?;
        }
        let log = RunLog {
            maze: maze_text,
            result: r,
        };
        write(
            &dir.join("run.json"),
            serde_json::to_string_pretty(&log)?.as_bytes(),
        )?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn cmd_batch(a: BatchArgs) -> Result<()> {
    let mut spec = ExperimentSpec::load(&a.spec)?;
    if let Some(s) = a.seed {
        spec.batch_seed = s;
    }
    if let Some(o) = a.out {
        spec.output = o;
    }
    let extra = a.budget.overrides();
    for e in &mut spec.experiments {
        if let Some(n) = a.runs {
            if n == 0 {
                bail!("--runs must be at least 1");
            }
            e.runs = n;
        }
        e.overrides = extra.or(&e.overrides);
        e.run_config(0).validate()?;
    }
    let summary = run_batch(&spec)?;
    print!("{}", tables::all_tables(&summary));
    println!("wrote {}", spec.output.display());
    Ok(())
}

fn cmd_render(a: RenderArgs) -> Result<()> {
    let text =
        fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let log: RunLog =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    let maze_text = match (&a.maze, log.maze) {
        (Some(m), _) => mazes::load_maze_text(m, None)?,
        (None, Some(t)) => t,
        (None, None) => bail!("{} is not a maze run; pass --maze", a.input.display()),
    };
    let grid = parse_maze(&maze_text)?;
    let t = log
        .result
        .best_trajectory
        .context("run log has no trajectory")?;
    let svg = render_trajectory_svg(&grid, &t)?;
    match a.out {
        Some(p) => write(&p, svg.as_bytes()),
        None => {
            print!("{svg}");
            Ok(())
        }
    }
}

fn cmd_tables(a: TablesArgs) -> Result<()> {
    let summary = batch::read_summary(&a.input)?;
    print!("{}", tables::all_tables(&summary));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Batch(a) => cmd_batch(a),
        Command::Render(a) => cmd_render(a),
        Command::Tables(a) => cmd_tables(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
