//! Domain-agnostic evolutionary operators.
//!
//! Genomes are fixed-length lists of reals, each gene confined to a closed
//! interval. One generation of breeding is: copy the elites, then repeatedly
//! pick two parents by tournament, cross them over at a single point and
//! give each child one chance of a single-gene mutation.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvoError {
    #[error("population is empty")]
    EmptyPopulation,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("gene {index} = {value} lies outside [{low}, {high}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        low: f64,
        high: f64,
    },
    #[error("invalid evolution parameters: {0}")]
    InvalidParams(&'static str),
}

/// Closed interval a gene must stay in.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bounds {
    pub low: f64,
    pub high: f64,
}

impl Bounds {
    pub const fn new(low: f64, high: f64) -> Self {
        Self { low, high }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.low && x <= self.high
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.low, self.high)
    }

    /// `len` copies of the same interval, shareable between genomes.
    pub fn uniform(len: usize, low: f64, high: f64) -> Arc<[Bounds]> {
        (0..len).map(|_| Bounds::new(low, high)).collect()
    }
}

/// A fixed-length real genome whose genes respect per-gene bounds.
///
/// The bounds are shared (`Arc`) by every genome of a population.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    genes: Vec<f64>,
    bounds: Arc<[Bounds]>,
}

impl Genome {
    /// Validating constructor.
    pub fn new(genes: Vec<f64>, bounds: Arc<[Bounds]>) -> Result<Self, EvoError> {
        if genes.len() != bounds.len() {
            return Err(EvoError::LengthMismatch {
                expected: bounds.len(),
                found: genes.len(),
            });
        }
        for (index, (&value, b)) in genes.iter().zip(bounds.iter()).enumerate() {
            if !b.contains(value) {
                return Err(EvoError::OutOfBounds {
                    index,
                    value,
                    low: b.low,
                    high: b.high,
                });
            }
        }
        Ok(Self { genes, bounds })
    }

    /// Like [`Genome::new`] but clamps out-of-range genes instead of failing.
    pub fn clamped(mut genes: Vec<f64>, bounds: Arc<[Bounds]>) -> Result<Self, EvoError> {
        if genes.len() != bounds.len() {
            return Err(EvoError::LengthMismatch {
                expected: bounds.len(),
                found: genes.len(),
            });
        }
        for (g, b) in genes.iter_mut().zip(bounds.iter()) {
            *g = b.clamp(*g);
        }
        Ok(Self { genes, bounds })
    }

    /// Every gene drawn uniformly from its interval.
    pub fn random(bounds: Arc<[Bounds]>, rng: &mut RngStream) -> Self {
        let genes = bounds.iter().map(|b| rng.uniform(b.low, b.high)).collect();
        Self { genes, bounds }
    }

    pub fn genes(&self) -> &[f64] {
        &self.genes
    }

    pub fn bounds(&self) -> &Arc<[Bounds]> {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn within_bounds(&self) -> bool {
        self.genes
            .iter()
            .zip(self.bounds.iter())
            .all(|(&g, b)| b.contains(g))
    }
}

/// Parameters of one evolving population.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvoParams {
    pub population_size: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-individual probability of a single-gene replacement.
    pub mutation_prob: f64,
    pub elite_count: usize,
    pub max_generations: usize,
}

impl Default for EvoParams {
    fn default() -> Self {
        Self {
            population_size: 200,
            tournament_size: 5,
            crossover_rate: 0.8,
            mutation_prob: 0.4,
            elite_count: 2,
            max_generations: 500,
        }
    }
}

impl EvoParams {
    pub fn validate(&self) -> Result<(), EvoError> {
        if self.population_size == 0 {
            return Err(EvoError::InvalidParams("population size must be positive"));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return Err(EvoError::InvalidParams(
                "tournament size must be in 1..=population size",
            ));
        }
        if self.elite_count >= self.population_size {
            return Err(EvoError::InvalidParams(
                "elite count must be below population size",
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_prob)
        {
            return Err(EvoError::InvalidParams("rates must lie in [0, 1]"));
        }
        if self.max_generations == 0 {
            return Err(EvoError::InvalidParams(
                "at least one generation is required",
            ));
        }
        Ok(())
    }
}

/// `n` genomes drawn uniformly within `bounds`.
pub fn random_population(bounds: &Arc<[Bounds]>, n: usize, rng: &mut RngStream) -> Vec<Genome> {
    (0..n)
        .map(|_| Genome::random(bounds.clone(), rng))
        .collect()
}

/// Draws `tournament_size` indices uniformly with replacement and returns the
/// one with the highest fitness; ties go to the lowest index.
pub fn tournament_select(
    fitnesses: &[f64],
    tournament_size: usize,
    rng: &mut RngStream,
) -> Result<usize, EvoError> {
    if fitnesses.is_empty() {
        return Err(EvoError::EmptyPopulation);
    }
    if tournament_size == 0 {
        return Err(EvoError::InvalidParams("tournament size must be positive"));
    }
    let mut best = rng.index(fitnesses.len());
    for _ in 1..tournament_size {
        let i = rng.index(fitnesses.len());
        if fitnesses[i] > fitnesses[best] || (fitnesses[i] == fitnesses[best] && i < best) {
            best = i;
        }
    }
    Ok(best)
}

/// With probability `rate`, swaps the parents' suffixes after a cut point
/// drawn uniformly from `1..len`; otherwise returns copies of the parents.
pub fn single_point_crossover(
    p1: &Genome,
    p2: &Genome,
    rate: f64,
    rng: &mut RngStream,
) -> Result<(Genome, Genome), EvoError> {
    if p1.len() != p2.len() {
        return Err(EvoError::LengthMismatch {
            expected: p1.len(),
            found: p2.len(),
        });
    }
    let mut c1 = p1.clone();
    let mut c2 = p2.clone();
    if p1.len() >= 2 && rng.bernoulli(rate) {
        let cut = 1 + rng.index(p1.len() - 1);
        swap_suffix(&mut c1, &mut c2, cut);
    }
    Ok((c1, c2))
}

pub(crate) fn swap_suffix(c1: &mut Genome, c2: &mut Genome, cut: usize) {
    c1.genes[cut..].swap_with_slice(&mut c2.genes[cut..]);
}

/// One Bernoulli draw with probability `prob`; on success one uniformly
/// chosen gene is redrawn uniformly from its interval.
pub fn mutate(g: &Genome, prob: f64, rng: &mut RngStream) -> Genome {
    let mut out = g.clone();
    mutate_in_place(&mut out, prob, rng);
    out
}

fn mutate_in_place(g: &mut Genome, prob: f64, rng: &mut RngStream) {
    if g.is_empty() || !rng.bernoulli(prob) {
        return;
    }
    let i = rng.index(g.len());
    let b = g.bounds[i];
    g.genes[i] = rng.uniform(b.low, b.high);
}

/// Indices sorted by descending fitness, ties by ascending index.
pub fn rank_by_fitness(fitnesses: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    // stable: equal fitnesses keep index order
    order.sort_by(|&a, &b| fitnesses[b].total_cmp(&fitnesses[a]));
    order
}

/// Breeds the next population: elites first, then tournament, crossover and
/// mutation until full. A surplus second child is dropped when the number of
/// non-elite slots is odd.
pub fn next_generation(
    population: &[Genome],
    fitnesses: &[f64],
    params: &EvoParams,
    rng: &mut RngStream,
) -> Result<Vec<Genome>, EvoError> {
    if population.is_empty() {
        return Err(EvoError::EmptyPopulation);
    }
    if fitnesses.len() != population.len() {
        return Err(EvoError::LengthMismatch {
            expected: population.len(),
            found: fitnesses.len(),
        });
    }
    if population.len() != params.population_size {
        return Err(EvoError::LengthMismatch {
            expected: params.population_size,
            found: population.len(),
        });
    }
    params.validate()?;

    let n = params.population_size;
    let mut next = Vec::with_capacity(n);
    next.extend(
        rank_by_fitness(fitnesses)
            .into_iter()
            .take(params.elite_count)
            .map(|i| population[i].clone()),
    );
    while next.len() < n {
        let a = tournament_select(fitnesses, params.tournament_size, rng)?;
        let b = tournament_select(fitnesses, params.tournament_size, rng)?;
        let (mut c1, mut c2) =
            single_point_crossover(&population[a], &population[b], params.crossover_rate, rng)?;
        mutate_in_place(&mut c1, params.mutation_prob, rng);
        mutate_in_place(&mut c2, params.mutation_prob, rng);
        next.push(c1);
        if next.len() < n {
            next.push(c2);
        }
    }
    Ok(next)
}
