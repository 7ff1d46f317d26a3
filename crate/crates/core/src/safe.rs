//! Solution and fitness coevolution.
//!
//! Two populations evolve in lockstep. Solutions are scored by every
//! objective function and keep the best score. An objective function is a
//! pair `[a, b]` in `[0, 1]^2` that weighs a solution's base quality (`a`)
//! against its behavioral novelty (`b`). Objective functions themselves are
//! scored by genotypic novelty, i.e. the distance between `[a, b]` genomes,
//! so their fitness never depends on the solutions.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::evo::{self, Bounds, EvoParams, Genome};
use crate::novelty::{generation_update, BehaviorPoint, NoveltyArchive, NoveltyParams};
use crate::rng::RngStream;
use crate::Error;

/// An evolving objective function: `a * baseQuality + b * novelty`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ObjectiveGenome {
    pub a: f64,
    pub b: f64,
}

impl ObjectiveGenome {
    pub fn bounds() -> Arc<[Bounds]> {
        Bounds::uniform(2, 0.0, 1.0)
    }

    pub fn from_genome(g: &Genome) -> Self {
        let x = g.genes();
        Self { a: x[0], b: x[1] }
    }

    pub fn to_genome(self) -> Result<Genome, evo::EvoError> {
        Genome::new(alloc::vec![self.a, self.b], Self::bounds())
    }
}

/// Everything the fitness functions need to know about one evaluated solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionMetrics {
    pub behavior: BehaviorPoint,
    /// Goal-directed quality, higher is better (e.g. `1 / distToGoal`).
    pub base_quality: f64,
    pub novelty_score: f64,
    /// The quantity reported to users, lower is better (distance to goal,
    /// or function value).
    pub raw_objective: f64,
    pub success: bool,
}

pub fn objective_score(obj: &ObjectiveGenome, m: &SolutionMetrics) -> f64 {
    obj.a * m.base_quality + obj.b * m.novelty_score
}

/// The objective giving `m` its highest score, as `(index, score)`; ties go
/// to the lowest index.
pub fn best_objective(
    m: &SolutionMetrics,
    objectives: &[ObjectiveGenome],
) -> Result<(usize, f64), Error> {
    let mut best: Option<(usize, f64)> = None;
    for (j, o) in objectives.iter().enumerate() {
        let s = objective_score(o, m);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((j, s));
        }
    }
    best.ok_or(Error::Evo(evo::EvoError::EmptyPopulation))
}

/// Each solution's fitness is its best score over all objectives.
pub fn solutions_fitness(
    metrics: &[SolutionMetrics],
    objectives: &[ObjectiveGenome],
) -> Result<Vec<f64>, Error> {
    metrics
        .iter()
        .map(|m| best_objective(m, objectives).map(|(_, s)| s))
        .collect()
}

/// Genotypic novelty of each objective function, against its cohort and the
/// objective archive (which is then updated).
pub fn objectives_fitness(
    objectives: &[ObjectiveGenome],
    archive: &mut NoveltyArchive,
    params: &NoveltyParams,
) -> Result<Vec<f64>, Error> {
    if objectives.is_empty() {
        return Err(evo::EvoError::EmptyPopulation.into());
    }
    let points: Vec<BehaviorPoint> = objectives
        .iter()
        .map(|o| BehaviorPoint(alloc::vec![o.a, o.b]))
        .collect();
    Ok(generation_update(&points, archive, params)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SafeParams {
    pub solutions: EvoParams,
    pub objectives: EvoParams,
    pub novelty: NoveltyParams,
}

/// Both populations, both archives and the generation counter.
#[derive(Debug, Clone)]
pub struct SafeState {
    pub solutions: Vec<Genome>,
    pub objectives: Vec<Genome>,
    pub solution_archive: NoveltyArchive,
    pub objective_archive: NoveltyArchive,
    pub generation: usize,
}

impl SafeState {
    /// Random initial populations.
    pub fn new(
        solution_bounds: &Arc<[Bounds]>,
        params: &SafeParams,
        solution_archive: NoveltyArchive,
        objective_archive: NoveltyArchive,
        rng: &mut RngStream,
    ) -> Self {
        let solutions =
            evo::random_population(solution_bounds, params.solutions.population_size, rng);
        let objectives = evo::random_population(
            &ObjectiveGenome::bounds(),
            params.objectives.population_size,
            rng,
        );
        Self {
            solutions,
            objectives,
            solution_archive,
            objective_archive,
            generation: 0,
        }
    }

    pub fn objective_genomes(&self) -> Vec<ObjectiveGenome> {
        self.objectives
            .iter()
            .map(ObjectiveGenome::from_genome)
            .collect()
    }
}

/// What one generation looked like before breeding.
#[derive(Debug, Clone)]
pub struct GenerationReport {
    pub generation: usize,
    pub metrics: Vec<SolutionMetrics>,
    pub solution_fitness: Vec<f64>,
    /// For each solution, the index of the objective that scored it best.
    pub best_objective: Vec<usize>,
    pub objectives: Vec<ObjectiveGenome>,
    pub objective_fitness: Vec<f64>,
}

/// Evaluates and scores both populations without breeding.
///
/// `evaluate` is called exactly once per solution and must leave
/// `novelty_score` at zero; it is filled in here.
pub fn evaluate_generation(
    state: &mut SafeState,
    evaluate: &mut dyn FnMut(&Genome) -> SolutionMetrics,
    params: &SafeParams,
) -> Result<GenerationReport, Error> {
    let mut metrics: Vec<SolutionMetrics> = state.solutions.iter().map(evaluate).collect();
    let behaviors: Vec<BehaviorPoint> = metrics.iter().map(|m| m.behavior.clone()).collect();
    let novelty = generation_update(&behaviors, &mut state.solution_archive, &params.novelty)?;
    for (m, n) in metrics.iter_mut().zip(novelty) {
        m.novelty_score = n;
    }

    let objectives = state.objective_genomes();
    let mut solution_fitness = Vec::with_capacity(metrics.len());
    let mut best = Vec::with_capacity(metrics.len());
    for m in &metrics {
        let (j, s) = best_objective(m, &objectives)?;
        best.push(j);
        solution_fitness.push(s);
    }
    let objective_fitness =
        objectives_fitness(&objectives, &mut state.objective_archive, &params.novelty)?;

    Ok(GenerationReport {
        generation: state.generation,
        metrics,
        solution_fitness,
        best_objective: best,
        objectives,
        objective_fitness,
    })
}

/// Breeds both populations independently from a report of the current one.
pub fn breed(
    state: &mut SafeState,
    report: &GenerationReport,
    params: &SafeParams,
    rng: &mut RngStream,
) -> Result<(), Error> {
    state.solutions = evo::next_generation(
        &state.solutions,
        &report.solution_fitness,
        &params.solutions,
        rng,
    )?;
    state.objectives = evo::next_generation(
        &state.objectives,
        &report.objective_fitness,
        &params.objectives,
        rng,
    )?;
    state.generation += 1;
    Ok(())
}

/// One full generation: evaluate, score both populations, breed both.
pub fn safe_generation(
    state: &mut SafeState,
    evaluate: &mut dyn FnMut(&Genome) -> SolutionMetrics,
    params: &SafeParams,
    rng: &mut RngStream,
) -> Result<GenerationReport, Error> {
    let report = evaluate_generation(state, evaluate, params)?;
    breed(state, &report, params, rng)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn metrics(base_quality: f64, novelty: f64) -> SolutionMetrics {
        SolutionMetrics {
            behavior: BehaviorPoint(vec![0.0, 0.0]),
            base_quality,
            novelty_score: novelty,
            raw_objective: 0.0,
            success: false,
        }
    }

    fn obj(a: f64, b: f64) -> ObjectiveGenome {
        ObjectiveGenome { a, b }
    }

    #[test]
    fn objective_score_examples() {
        assert_eq!(objective_score(&obj(1.0, 0.0), &metrics(0.25, 7.0)), 0.25);
        assert_eq!(objective_score(&obj(0.0, 1.0), &metrics(0.25, 7.0)), 7.0);
        assert_eq!(objective_score(&obj(0.5, 0.5), &metrics(0.5, 10.0)), 5.25);
    }

    #[test]
    fn solution_fitness_is_max_over_objectives() {
        let f = solutions_fitness(&[metrics(0.25, 7.0)], &[obj(1.0, 0.0), obj(0.0, 1.0)]).unwrap();
        assert_eq!(f, vec![7.0]);
        let f = solutions_fitness(&[metrics(0.9, 123.0)], &[obj(0.0, 0.0)]).unwrap();
        assert_eq!(f, vec![0.0]);
        assert!(solutions_fitness(&[metrics(1.0, 1.0)], &[]).is_err());
    }

    #[test]
    fn objectives_fitness_examples() {
        let mut a = NoveltyArchive::new(1000).unwrap();
        let f = objectives_fitness(
            &[obj(0.0, 0.0), obj(1.0, 1.0)],
            &mut a,
            &NoveltyParams::default(),
        )
        .unwrap();
        assert!((f[0] - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(f[0], f[1]);
        assert_eq!(a.len(), 2);

        let mut a = NoveltyArchive::new(1000).unwrap();
        let f =
            objectives_fitness(&[obj(0.3, 0.6); 10], &mut a, &NoveltyParams::default()).unwrap();
        assert!(f.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn objective_scores_match_oracle_on_200_genomes() {
        let mut rng = RngStream::new(200);
        let objs: Vec<ObjectiveGenome> = (0..200)
            .map(|_| obj(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)))
            .collect();
        let mut a = NoveltyArchive::new(1000).unwrap();
        let f = objectives_fitness(&objs, &mut a, &NoveltyParams::default()).unwrap();
        for (i, o) in objs.iter().enumerate() {
            let mut d: Vec<f64> = objs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| libm::sqrt((o.a - p.a) * (o.a - p.a) + (o.b - p.b) * (o.b - p.b)))
                .collect();
            d.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let oracle = d[..15].iter().sum::<f64>() / 15.0;
            assert!((f[i] - oracle).abs() < 1e-12);
        }
    }

    fn small_params() -> SafeParams {
        let p = EvoParams {
            population_size: 12,
            tournament_size: 3,
            ..EvoParams::default()
        };
        SafeParams {
            solutions: p,
            objectives: p,
            novelty: NoveltyParams { k: 4 },
        }
    }

    fn eval_sphere(g: &Genome) -> SolutionMetrics {
        let f: f64 = g.genes().iter().map(|x| x * x).sum();
        SolutionMetrics {
            behavior: BehaviorPoint(g.genes().to_vec()),
            base_quality: 1.0 / (1.0 + f),
            novelty_score: 0.0,
            raw_objective: f,
            success: false,
        }
    }

    fn new_state(params: &SafeParams, seed: u64) -> (SafeState, RngStream) {
        let mut rng = RngStream::new(seed);
        let s = SafeState::new(
            &Bounds::uniform(3, -2.0, 2.0),
            params,
            NoveltyArchive::new(20).unwrap(),
            NoveltyArchive::new(20).unwrap(),
            &mut rng,
        );
        (s, rng)
    }

    #[test]
    fn generation_conserves_sizes_and_counts_evaluations() {
        let params = small_params();
        let (mut s, mut rng) = new_state(&params, 1);
        for _ in 0..5 {
            let mut calls = 0;
            let r = safe_generation(
                &mut s,
                &mut |g| {
                    calls += 1;
                    eval_sphere(g)
                },
                &params,
                &mut rng,
            )
            .unwrap();
            assert_eq!(calls, 12);
            assert_eq!(r.metrics.len(), 12);
            assert_eq!(s.solutions.len(), 12);
            assert_eq!(s.objectives.len(), 12);
            assert!(s.objectives.iter().all(Genome::within_bounds));
            assert!(s.solutions.iter().all(Genome::within_bounds));
        }
        assert_eq!(s.generation, 5);
    }

    #[test]
    fn seeded_generation_replays() {
        let params = small_params();
        let (mut s1, mut r1) = new_state(&params, 9);
        let (mut s2, mut r2) = new_state(&params, 9);
        for _ in 0..3 {
            safe_generation(&mut s1, &mut eval_sphere, &params, &mut r1).unwrap();
            safe_generation(&mut s2, &mut eval_sphere, &params, &mut r2).unwrap();
        }
        assert_eq!(s1.solutions, s2.solutions);
        assert_eq!(s1.objectives, s2.objectives);
    }

    #[test]
    fn frozen_goal_only_objective_ranks_like_base_quality() {
        let params = small_params();
        let (mut s, _) = new_state(&params, 4);
        s.objectives = vec![obj(1.0, 0.0).to_genome().unwrap(); 12];
        let r = evaluate_generation(&mut s, &mut eval_sphere, &params).unwrap();
        let bq: Vec<f64> = r.metrics.iter().map(|m| m.base_quality).collect();
        assert_eq!(r.solution_fitness, bq);
        assert_eq!(
            evo::rank_by_fitness(&r.solution_fitness),
            evo::rank_by_fitness(&bq)
        );
    }

    proptest! {
        #[test]
        fn max_properties(seed in any::<u64>(), n in 1usize..30) {
            let mut rng = RngStream::new(seed);
            let objs: Vec<ObjectiveGenome> = (0..n).map(|_| obj(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0))).collect();
            let ms: Vec<SolutionMetrics> = (0..10).map(|_| metrics(rng.uniform(0.0, 1.0), rng.uniform(0.0, 50.0))).collect();
            let f = solutions_fitness(&ms, &objs).unwrap();

            let mut rev = objs.clone();
            rev.reverse();
            prop_assert_eq!(&solutions_fitness(&ms, &rev).unwrap(), &f);

            let mut more = objs.clone();
            more.push(obj(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)));
            let g = solutions_fitness(&ms, &more).unwrap();

            let max_a = objs.iter().map(|o| o.a).fold(0.0, f64::max);
            let max_b = objs.iter().map(|o| o.b).fold(0.0, f64::max);
            for (i, m) in ms.iter().enumerate() {
                for o in &objs {
                    prop_assert!(f[i] >= objective_score(o, m));
                }
                prop_assert!(g[i] >= f[i]);
                prop_assert!(f[i] <= max_a * m.base_quality + max_b * m.novelty_score + 1e-12);
            }
        }
    }
}
