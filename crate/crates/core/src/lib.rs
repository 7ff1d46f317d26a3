#![no_std]

//! Solution-and-fitness coevolution for deceptive search problems.
//!
//! This crate holds the algorithmic core and performs no IO:
//!
//! - [`evo`]: tournament selection, single-point crossover, single-gene
//!   mutation and elitist generational replacement over bounded real genomes.
//! - [`maze`]: a grid maze, an 8-sensor robot driven by a 16-weight linear
//!   controller, and a deterministic step simulator under taxicab geometry.
//! - [`novelty`]: k-nearest-neighbour novelty scores and a fixed-capacity
//!   archive with minimum replacement.
//! - [`safe`]: the two-population engine, where solutions are scored by the
//!   best of an evolving population of objective functions and the objective
//!   functions evolve by genotypic novelty.
//! - [`functions`]: Rastrigin, Rosenbrock and Cigar.
//! - [`runners`]: standard EA, novelty search, SAFE, fixed-mix and random
//!   search over a common [`runners::DomainAdapter`].
//!
//! All randomness flows through [`RngStream`], so a run is a pure function of
//! its configuration and seed.

extern crate alloc;

pub mod evo;
pub mod functions;
pub mod maze;
pub mod novelty;
pub mod rng;
pub mod runners;
pub mod safe;

mod error;

pub use error::Error;
pub use evo::{Bounds, EvoParams, Genome};
pub use maze::{ControllerGenome, MazeGrid, Position, Trajectory};
pub use novelty::{BehaviorPoint, NoveltyArchive, NoveltyParams};
pub use rng::RngStream;
pub use runners::{Algorithm, DomainAdapter, RunConfig, RunResult};
pub use safe::{ObjectiveGenome, SolutionMetrics};
