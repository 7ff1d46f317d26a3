//! The experiment algorithms, written once over a [`DomainAdapter`].
//!
//! | algorithm   | solution fitness                                   |
//! |-------------|----------------------------------------------------|
//! | `standard`  | base quality                                       |
//! | `novelty`   | phenotypic novelty                                 |
//! | `safe`      | best score over the coevolving objective functions |
//! | `fixed-mix` | `0.5 * base quality + 0.5 * novelty`               |
//! | `random`    | none; uniform draws, best kept                     |
//!
//! Every generational algorithm evaluates exactly `population_size`
//! individuals per generation; random search evaluates exactly its budget.
//! Results always report the best *raw* objective (distance to goal or
//! function value), never the internal fitness.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::evo::{self, Bounds, EvoParams, Genome};
use crate::functions::BenchmarkFunction;
use crate::maze::{self, ControllerGenome, MazeGrid, Trajectory};
use crate::novelty::{generation_update, BehaviorPoint, NoveltyArchive, NoveltyParams};
use crate::rng::RngStream;
use crate::safe::{self, SafeParams, SafeState, SolutionMetrics};
use crate::Error;

/// A problem the runners can search.
pub trait DomainAdapter {
    fn bounds(&self) -> Arc<[Bounds]>;

    /// Deterministic evaluation; `novelty_score` is left at zero.
    fn evaluate(&self, genome: &Genome) -> SolutionMetrics;

    fn label(&self) -> String;

    /// Full path of a genome, for domains that have one.
    fn trajectory(&self, _genome: &Genome) -> Option<Trajectory> {
        None
    }
}

/// Robot controllers in a maze. Behavior is the endpoint, base quality
/// `1 / max(distToGoal, 1)`, raw objective the taxicab distance to goal.
#[derive(Debug, Clone)]
pub struct MazeDomain {
    pub grid: MazeGrid,
    pub max_steps: usize,
    pub stop_distance: usize,
    pub name: String,
}

impl MazeDomain {
    pub const MAX_STEPS: usize = 300;
    pub const STOP_DISTANCE: usize = 2;

    pub fn new(name: impl Into<String>, grid: MazeGrid) -> Self {
        Self {
            grid,
            max_steps: Self::MAX_STEPS,
            stop_distance: Self::STOP_DISTANCE,
            name: name.into(),
        }
    }

    fn controller(genome: &Genome) -> ControllerGenome {
        ControllerGenome::from_genes(genome.genes()).expect("maze genomes have 16 genes")
    }
}

impl DomainAdapter for MazeDomain {
    fn bounds(&self) -> Arc<[Bounds]> {
        ControllerGenome::bounds()
    }

    fn evaluate(&self, genome: &Genome) -> SolutionMetrics {
        let o = maze::simulate_outcome(
            &self.grid,
            &Self::controller(genome),
            self.max_steps,
            self.stop_distance,
        );
        SolutionMetrics {
            behavior: BehaviorPoint(alloc::vec![o.endpoint.col as f64, o.endpoint.row as f64]),
            base_quality: 1.0 / o.dist_to_goal.max(1) as f64,
            novelty_score: 0.0,
            raw_objective: o.dist_to_goal as f64,
            success: o.success,
        }
    }

    fn label(&self) -> String {
        self.name.clone()
    }

    fn trajectory(&self, genome: &Genome) -> Option<Trajectory> {
        Some(maze::simulate(
            &self.grid,
            &Self::controller(genome),
            self.max_steps,
            self.stop_distance,
        ))
    }
}

/// Real-parameter minimization on `[-100, 100]^D`.
///
/// Behavior is the candidate vector times `behavior_scale`, base quality
/// `1 / (1 + ln(1 + f(x)))`. Scaling leaves novelty rankings unchanged and
/// the log keeps quality monotone in `f`, so only mixed fitness is affected.
#[derive(Debug, Clone)]
pub struct FunctionDomain {
    pub function: BenchmarkFunction,
    pub dim: usize,
    /// A candidate with `f(x) <= threshold` counts as a success.
    pub success_threshold: Option<f64>,
    pub behavior_scale: f64,
}

impl FunctionDomain {
    pub fn new(function: BenchmarkFunction, dim: usize) -> Result<Self, Error> {
        if dim < function.min_dim().max(1) {
            return Err(crate::functions::FunctionError::TooFewDimensions {
                function: function.name(),
                min: function.min_dim(),
                got: dim,
            }
            .into());
        }
        Ok(Self {
            function,
            dim,
            success_threshold: None,
            behavior_scale: Self::default_behavior_scale(dim),
        })
    }

    /// `0.01 / diameter` of the search box.
    pub fn default_behavior_scale(dim: usize) -> f64 {
        0.01 / (200.0 * libm::sqrt(dim as f64))
    }
}

impl DomainAdapter for FunctionDomain {
    fn bounds(&self) -> Arc<[Bounds]> {
        BenchmarkFunction::bounds(self.dim)
    }

    fn evaluate(&self, genome: &Genome) -> SolutionMetrics {
        let f = self
            .function
            .evaluate(genome.genes())
            .expect("dimension checked at construction");
        SolutionMetrics {
            behavior: BehaviorPoint(
                genome
                    .genes()
                    .iter()
                    .map(|x| x * self.behavior_scale)
                    .collect(),
            ),
            base_quality: 1.0 / (1.0 + libm::log1p(f)),
            novelty_score: 0.0,
            raw_objective: f,
            success: self.success_threshold.is_some_and(|t| f <= t),
        }
    }

    fn label(&self) -> String {
        alloc::format!("{}-{}", self.function, self.dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Algorithm {
    Standard,
    Novelty,
    Safe,
    Random,
    FixedMix,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Self::Standard,
        Self::Novelty,
        Self::Safe,
        Self::Random,
        Self::FixedMix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::Novelty => "novelty",
            Self::Safe => "safe",
            Self::Random => "random",
            Self::FixedMix => "fixed-mix",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::Config(alloc::format!(
                    "unknown algorithm {s:?}; expected one of: standard, novelty, safe, random, fixed-mix"
                ))
            })
    }
}

/// Everything that determines a run apart from its domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub evo: EvoParams,
    /// Breeding parameters of the objective-function population (SAFE only).
    pub objective_evo: EvoParams,
    pub novelty: NoveltyParams,
    pub solution_archive_capacity: usize,
    pub objective_archive_capacity: usize,
    /// Draws for random search; `None` means generations x population size.
    pub random_budget: Option<usize>,
    pub seed: u64,
    pub stop_on_success: bool,
}

impl RunConfig {
    /// Defaults for maze runs: stop at the first success.
    pub fn maze(algorithm: Algorithm, seed: u64) -> Self {
        Self {
            algorithm,
            evo: EvoParams::default(),
            objective_evo: EvoParams::default(),
            novelty: NoveltyParams::default(),
            solution_archive_capacity: NoveltyArchive::DEFAULT_CAPACITY,
            objective_archive_capacity: NoveltyArchive::DEFAULT_CAPACITY,
            random_budget: None,
            seed,
            stop_on_success: true,
        }
    }

    /// Defaults for function runs: always run every generation.
    pub fn function(algorithm: Algorithm, seed: u64) -> Self {
        Self {
            stop_on_success: false,
            ..Self::maze(algorithm, seed)
        }
    }

    pub fn random_budget(&self) -> usize {
        self.random_budget
            .unwrap_or(self.evo.max_generations * self.evo.population_size)
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.evo.validate()?;
        if self.algorithm == Algorithm::Safe {
            self.objective_evo.validate()?;
        }
        if self.novelty.k == 0 {
            return Err(Error::Config("k must be positive".into()));
        }
        if self.solution_archive_capacity == 0 || self.objective_archive_capacity == 0 {
            return Err(Error::Config("archive capacities must be positive".into()));
        }
        if self.algorithm == Algorithm::Random && self.random_budget() == 0 {
            return Err(Error::Config("random budget must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-generation telemetry.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenerationRecord {
    pub generation: usize,
    /// Best raw objective within this generation.
    pub best_raw: f64,
    pub best_raw_so_far: f64,
    pub best_fitness: f64,
    /// Mean coefficients of the objective population (SAFE only).
    pub mean_a: Option<f64>,
    pub mean_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub domain: String,
    pub seed: u64,
    pub success: bool,
    /// Zero-based generation in which the first successful individual was
    /// evaluated (for random search: draw index / population size).
    pub generations_to_success: Option<usize>,
    pub generations_executed: usize,
    pub evaluations: u64,
    pub best_raw_objective: f64,
    pub best_genome: Vec<f64>,
    pub best_trajectory: Option<Trajectory>,
    pub telemetry: Vec<GenerationRecord>,
    /// SAFE only: mean `(a, b)` of the objectives that gave the successful
    /// solutions of the success generation their fitness.
    pub success_objective: Option<(f64, f64)>,
}

struct Tracker {
    best_raw: f64,
    best_genome: Option<Genome>,
    success_generation: Option<usize>,
    evaluations: u64,
    telemetry: Vec<GenerationRecord>,
    success_objective: Option<(f64, f64)>,
}

impl Tracker {
    fn new() -> Self {
        Self {
            best_raw: f64::INFINITY,
            best_genome: None,
            success_generation: None,
            evaluations: 0,
            telemetry: Vec::new(),
            success_objective: None,
        }
    }

    fn observe(&mut self, generation: usize, genome: &Genome, m: &SolutionMetrics) {
        self.evaluations += 1;
        if m.raw_objective < self.best_raw || self.best_genome.is_none() {
            self.best_raw = m.raw_objective;
            self.best_genome = Some(genome.clone());
        }
        if m.success && self.success_generation.is_none() {
            self.success_generation = Some(generation);
        }
    }

    fn record(
        &mut self,
        generation: usize,
        metrics: &[SolutionMetrics],
        fitness: impl Iterator<Item = f64>,
        coefficients: Option<(f64, f64)>,
    ) {
        let best_raw = metrics
            .iter()
            .map(|m| m.raw_objective)
            .fold(f64::INFINITY, f64::min);
        self.telemetry.push(GenerationRecord {
            generation,
            best_raw,
            best_raw_so_far: self.best_raw,
            best_fitness: fitness.fold(f64::NEG_INFINITY, f64::max),
            mean_a: coefficients.map(|c| c.0),
            mean_b: coefficients.map(|c| c.1),
        });
    }

    fn finish(
        self,
        config: &RunConfig,
        adapter: &dyn DomainAdapter,
        generations_executed: usize,
    ) -> RunResult {
        let best = self.best_genome.expect("at least one evaluation");
        RunResult {
            algorithm: config.algorithm,
            domain: adapter.label(),
            seed: config.seed,
            success: self.success_generation.is_some(),
            generations_to_success: self.success_generation,
            generations_executed,
            evaluations: self.evaluations,
            best_raw_objective: self.best_raw,
            best_trajectory: adapter.trajectory(&best),
            best_genome: best.genes().to_vec(),
            telemetry: self.telemetry,
            success_objective: self.success_objective,
        }
    }
}

#[derive(Clone, Copy)]
enum Fitness {
    Base,
    Novelty,
    Mix { a: f64, b: f64 },
}

fn run_generational(
    config: &RunConfig,
    adapter: &dyn DomainAdapter,
    fitness: Fitness,
) -> Result<RunResult, Error> {
    config.validate()?;
    let mut rng = RngStream::new(config.seed);
    let n = config.evo.population_size;
    let mut archive = NoveltyArchive::new(config.solution_archive_capacity)?;
    let mut population = evo::random_population(&adapter.bounds(), n, &mut rng);
    let mut tracker = Tracker::new();
    let mut executed = 0;

    for generation in 0..config.evo.max_generations {
        let mut metrics: Vec<SolutionMetrics> =
            population.iter().map(|g| adapter.evaluate(g)).collect();
        if !matches!(fitness, Fitness::Base) {
            let behaviors: Vec<BehaviorPoint> =
                metrics.iter().map(|m| m.behavior.clone()).collect();
            let scores = generation_update(&behaviors, &mut archive, &config.novelty)?;
            for (m, s) in metrics.iter_mut().zip(scores) {
                m.novelty_score = s;
            }
        }
        let values: Vec<f64> = metrics
            .iter()
            .map(|m| match fitness {
                Fitness::Base => m.base_quality,
                Fitness::Novelty => m.novelty_score,
                Fitness::Mix { a, b } => a * m.base_quality + b * m.novelty_score,
            })
            .collect();
        for (g, m) in population.iter().zip(&metrics) {
            tracker.observe(generation, g, m);
        }
        tracker.record(generation, &metrics, values.iter().copied(), None);
        executed = generation + 1;

        if config.stop_on_success && tracker.success_generation.is_some() {
            break;
        }
        if executed < config.evo.max_generations {
            population = evo::next_generation(&population, &values, &config.evo, &mut rng)?;
        }
    }
    Ok(tracker.finish(config, adapter, executed))
}

/// Generational EA with fitness = base quality.
pub fn run_standard_ea(
    config: &RunConfig,
    adapter: &dyn DomainAdapter,
) -> Result<RunResult, Error> {
    run_generational(config, adapter, Fitness::Base)
}

/// Generational EA with fitness = phenotypic novelty; success is still
/// tracked on the raw metrics.
pub fn run_novelty_search(
    config: &RunConfig,
    adapter: &dyn DomainAdapter,
) -> Result<RunResult, Error> {
    run_generational(config, adapter, Fitness::Novelty)
}

/// Generational EA with the fixed objective `0.5 * base + 0.5 * novelty`.
pub fn run_fixed_mix(config: &RunConfig, adapter: &dyn DomainAdapter) -> Result<RunResult, Error> {
    run_generational(config, adapter, Fitness::Mix { a: 0.5, b: 0.5 })
}

/// Two-population coevolution of solutions and objective functions.
pub fn run_safe(config: &RunConfig, adapter: &dyn DomainAdapter) -> Result<RunResult, Error> {
    config.validate()?;
    let mut rng = RngStream::new(config.seed);
    let params = SafeParams {
        solutions: config.evo,
        objectives: config.objective_evo,
        novelty: config.novelty,
    };
    let mut state = SafeState::new(
        &adapter.bounds(),
        &params,
        NoveltyArchive::new(config.solution_archive_capacity)?,
        NoveltyArchive::new(config.objective_archive_capacity)?,
        &mut rng,
    );
    let mut tracker = Tracker::new();
    let mut executed = 0;

    for generation in 0..config.evo.max_generations {
        let report = safe::evaluate_generation(&mut state, &mut |g| adapter.evaluate(g), &params)?;
        let had_success = tracker.success_generation.is_some();
        for (g, m) in state.solutions.iter().zip(&report.metrics) {
            tracker.observe(generation, g, m);
        }
        if !had_success && tracker.success_generation.is_some() {
            tracker.success_objective = mean_pair(
                report
                    .metrics
                    .iter()
                    .zip(&report.best_objective)
                    .filter(|(m, _)| m.success)
                    .map(|(_, &j)| (report.objectives[j].a, report.objectives[j].b)),
            );
        }
        let coefficients = mean_pair(report.objectives.iter().map(|o| (o.a, o.b)));
        tracker.record(
            generation,
            &report.metrics,
            report.solution_fitness.iter().copied(),
            coefficients,
        );
        executed = generation + 1;

        if config.stop_on_success && tracker.success_generation.is_some() {
            break;
        }
        if executed < config.evo.max_generations {
            safe::breed(&mut state, &report, &params, &mut rng)?;
        }
    }
    Ok(tracker.finish(config, adapter, executed))
}

fn mean_pair(it: impl Iterator<Item = (f64, f64)>) -> Option<(f64, f64)> {
    let (mut sa, mut sb, mut n) = (0.0, 0.0, 0usize);
    for (a, b) in it {
        sa += a;
        sb += b;
        n += 1;
    }
    (n > 0).then(|| (sa / n as f64, sb / n as f64))
}

/// Evaluates `random_budget` uniform genomes and keeps the best. Telemetry
/// groups draws into population-sized chunks.
pub fn run_random_search(
    config: &RunConfig,
    adapter: &dyn DomainAdapter,
) -> Result<RunResult, Error> {
    config.validate()?;
    let mut rng = RngStream::new(config.seed);
    let bounds = adapter.bounds();
    let budget = config.random_budget();
    let chunk = config.evo.population_size;
    let mut tracker = Tracker::new();
    let mut batch = Vec::with_capacity(chunk);
    for draw in 0..budget {
        let g = Genome::random(bounds.clone(), &mut rng);
        let m = adapter.evaluate(&g);
        tracker.observe(draw / chunk, &g, &m);
        batch.push(m);
        if batch.len() == chunk || draw + 1 == budget {
            let fitness: Vec<f64> = batch.iter().map(|m| m.base_quality).collect();
            tracker.record(draw / chunk, &batch, fitness.into_iter(), None);
            batch.clear();
        }
    }
    Ok(tracker.finish(config, adapter, budget.div_ceil(chunk)))
}

/// Dispatches on `config.algorithm`.
pub fn run(config: &RunConfig, adapter: &dyn DomainAdapter) -> Result<RunResult, Error> {
    match config.algorithm {
        Algorithm::Standard => run_standard_ea(config, adapter),
        Algorithm::Novelty => run_novelty_search(config, adapter),
        Algorithm::Safe => run_safe(config, adapter),
        Algorithm::FixedMix => run_fixed_mix(config, adapter),
        Algorithm::Random => run_random_search(config, adapter),
    }
}
