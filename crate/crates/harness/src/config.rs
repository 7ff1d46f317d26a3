//! Experiment specs: a TOML file listing experiments to run as one batch.
//!
//! ```toml
//! batch_seed = 1
//! output = "out/table3"
//!
//! [defaults]
//! generations = 500
//!
//! [[experiment]]
//! label = "safe-maze1"
//! algorithm = "safe"
//! maze = "maze1"
//! runs = 20
//!
//! [[experiment]]
//! label = "ea-rastrigin"
//! algorithm = "standard"
//! function = "rastrigin"
//! dim = 10
//! runs = 10
//! pop_size = 100
//! ```
//!
//! `runs` defaults to 500 for mazes and 30 for functions. Override keys
//! (`generations`, `pop_size`, `objective_pop_size`, `random_budget`,
//! `novelty_k`, `archive_capacity`, `stop_on_success`) may appear in
//! `[defaults]` or on an experiment; the experiment wins.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use safe_core::functions::BenchmarkFunction;
use safe_core::runners::{DomainAdapter, FunctionDomain, MazeDomain};
use safe_core::{Algorithm, MazeGrid, RunConfig};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::mazes;

/// Run-config overrides. Anything unset keeps the domain default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub generations: Option<usize>,
    pub pop_size: Option<usize>,
    pub objective_pop_size: Option<usize>,
    pub random_budget: Option<usize>,
    pub novelty_k: Option<usize>,
    pub archive_capacity: Option<usize>,
    pub stop_on_success: Option<bool>,
}

impl Overrides {
    /// `self` wins over `base`.
    pub fn or(&self, base: &Overrides) -> Overrides {
        Overrides {
            generations: self.generations.or(base.generations),
            pop_size: self.pop_size.or(base.pop_size),
            objective_pop_size: self.objective_pop_size.or(base.objective_pop_size),
            random_budget: self.random_budget.or(base.random_budget),
            novelty_k: self.novelty_k.or(base.novelty_k),
            archive_capacity: self.archive_capacity.or(base.archive_capacity),
            stop_on_success: self.stop_on_success.or(base.stop_on_success),
        }
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(g) = self.generations {
            cfg.evo.max_generations = g;
            cfg.objective_evo.max_generations = g;
        }
        if let Some(p) = self.pop_size {
            cfg.evo.population_size = p;
        }
        if let Some(p) = self.objective_pop_size {
            cfg.objective_evo.population_size = p;
        }
        if self.random_budget.is_some() {
            cfg.random_budget = self.random_budget;
        }
        if let Some(k) = self.novelty_k {
            cfg.novelty.k = k;
        }
        if let Some(c) = self.archive_capacity {
            cfg.solution_archive_capacity = c;
            cfg.objective_archive_capacity = c;
        }
        if let Some(s) = self.stop_on_success {
            cfg.stop_on_success = s;
        }
    }
}

pub const DEFAULT_MAZE_RUNS: usize = 500;
pub const DEFAULT_FUNCTION_RUNS: usize = 30;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    batch_seed: u64,
    output: Option<PathBuf>,
    #[serde(default)]
    defaults: Overrides,
    #[serde(default, rename = "experiment")]
    experiments: Vec<RawExperiment>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    label: String,
    algorithm: String,
    maze: Option<String>,
    function: Option<String>,
    dim: Option<usize>,
    runs: Option<usize>,
    generations: Option<usize>,
    pop_size: Option<usize>,
    objective_pop_size: Option<usize>,
    random_budget: Option<usize>,
    novelty_k: Option<usize>,
    archive_capacity: Option<usize>,
    stop_on_success: Option<bool>,
}

impl RawExperiment {
    fn overrides(&self) -> Overrides {
        Overrides {
            generations: self.generations,
            pop_size: self.pop_size,
            objective_pop_size: self.objective_pop_size,
            random_budget: self.random_budget,
            novelty_k: self.novelty_k,
            archive_capacity: self.archive_capacity,
            stop_on_success: self.stop_on_success,
        }
    }
}

/// What an experiment searches.
#[derive(Debug, Clone)]
pub enum Domain {
    Maze {
        name: String,
        grid: Arc<MazeGrid>,
    },
    Function {
        function: BenchmarkFunction,
        dim: usize,
    },
}

impl Domain {
    pub fn maze(reference: &str, base: Option<&Path>) -> Result<Self> {
        let (name, grid) = mazes::load_maze(reference, base)?;
        Ok(Domain::Maze {
            name,
            grid: Arc::new(grid),
        })
    }

    pub fn function(name: &str, dim: usize) -> Result<Self> {
        let function: BenchmarkFunction = name.parse().map_err(safe_core::Error::from)?;
        // validates the dimension
        FunctionDomain::new(function, dim)?;
        Ok(Domain::Function { function, dim })
    }

    pub fn is_maze(&self) -> bool {
        matches!(self, Domain::Maze { .. })
    }

    pub fn label(&self) -> String {
        match self {
            Domain::Maze { name, .. } => name.clone(),
            Domain::Function { function, dim } => format!("{function}-{dim}"),
        }
    }

    pub fn adapter(&self) -> Box<dyn DomainAdapter + Send + Sync> {
        match self {
            Domain::Maze { name, grid } => {
                Box::new(MazeDomain::new(name.clone(), (**grid).clone()))
            }
            Domain::Function { function, dim } => Box::new(
                FunctionDomain::new(*function, *dim)
                    .expect("dimension checked in Domain::function"),
            ),
        }
    }

    /// Domain defaults for a run of `algorithm` with `seed`.
    pub fn run_config(&self, algorithm: Algorithm, seed: u64) -> RunConfig {
        match self {
            Domain::Maze { .. } => RunConfig::maze(algorithm, seed),
            Domain::Function { .. } => RunConfig::function(algorithm, seed),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub label: String,
    pub algorithm: Algorithm,
    pub domain: Domain,
    pub runs: usize,
    pub overrides: Overrides,
}

impl Experiment {
    pub fn run_config(&self, seed: u64) -> RunConfig {
        let mut cfg = self.domain.run_config(self.algorithm, seed);
        self.overrides.apply(&mut cfg);
        cfg
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub batch_seed: u64,
    pub output: PathBuf,
    pub experiments: Vec<Experiment>,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text, path.parent()).map_err(|e| match e {
            HarnessError::Toml { source, .. } => HarnessError::Toml {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    /// Parses spec text; relative maze paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let raw: RawSpec = toml::from_str(text).map_err(|source| HarnessError::Toml {
            path: PathBuf::from("<spec>"),
            source,
        })?;
        if raw.experiments.is_empty() {
            return Err(HarnessError::Spec("no [[experiment]] entries".into()));
        }
        let mut seen = BTreeSet::new();
        let mut experiments = Vec::with_capacity(raw.experiments.len());
        for e in raw.experiments {
            if !seen.insert(e.label.clone()) {
                return Err(HarnessError::Spec(format!("duplicate label {:?}", e.label)));
            }
            let runs = e.runs.unwrap_or(if e.maze.is_some() {
                DEFAULT_MAZE_RUNS
            } else {
                DEFAULT_FUNCTION_RUNS
            });
            if runs == 0 {
                return Err(HarnessError::Spec(format!(
                    "{}: runs must be at least 1",
                    e.label
                )));
            }
            let algorithm: Algorithm = e.algorithm.parse()?;
            let domain = match (&e.maze, &e.function) {
                (Some(m), None) => {
                    if e.dim.is_some() {
                        return Err(HarnessError::Spec(format!(
                            "{}: dim is only for functions",
                            e.label
                        )));
                    }
                    Domain::maze(m, base)?
                }
                (None, Some(f)) => {
                    let dim = e.dim.ok_or_else(|| {
                        HarnessError::Spec(format!("{}: function needs dim", e.label))
                    })?;
                    Domain::function(f, dim)?
                }
                _ => {
                    return Err(HarnessError::Spec(format!(
                        "{}: set exactly one of maze or function",
                        e.label
                    )))
                }
            };
            let overrides = e.overrides().or(&raw.defaults);
            let exp = Experiment {
                label: e.label,
                algorithm,
                domain,
                runs,
                overrides,
            };
            exp.run_config(0).validate()?;
            experiments.push(exp);
        }
        Ok(Self {
            batch_seed: raw.batch_seed,
            output: raw.output.unwrap_or_else(|| PathBuf::from("out")),
            experiments,
        })
    }
}
