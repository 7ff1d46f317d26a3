//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::time::Instant;

use safe_core::functions::{cigar, rastrigin, rosenbrock};
use safe_core::maze::{parse_maze, sense, simulate, Cell, ControllerGenome, MazeGrid, Position};
use safe_core::novelty::{knn_novelty, BehaviorPoint, NoveltyArchive, NoveltyParams};
use safe_core::safe::{objective_score, solutions_fitness, ObjectiveGenome, SolutionMetrics};
use safe_core::{Algorithm, RngStream};
use safe_harness::batch::{run_batch, BatchSummary, ExperimentSummary};
use safe_harness::{Domain, Experiment, ExperimentSpec, Overrides};

const BATCH_SEED: u64 = 2024;
const MAZE_RUNS: usize = 20;

struct Report {
    failures: usize,
}

impl Report {
    fn check(&mut self, id: &str, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!(
            "{} {id:>2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
}

fn experiment(
    label: &str,
    algorithm: Algorithm,
    domain: Domain,
    runs: usize,
    overrides: Overrides,
) -> Experiment {
    Experiment {
        label: label.into(),
        algorithm,
        domain,
        runs,
        overrides,
    }
}

fn find<'a>(s: &'a BatchSummary, label: &str) -> &'a ExperimentSummary {
    s.experiments.iter().find(|e| e.label == label).unwrap()
}

fn maze1_batch(dir: &std::path::Path) -> BatchSummary {
    let maze = Domain::maze("maze1", None).unwrap();
    let experiments = [
        ("standard", Algorithm::Standard),
        ("novelty", Algorithm::Novelty),
        ("safe", Algorithm::Safe),
        ("random", Algorithm::Random),
        ("fixed-mix", Algorithm::FixedMix),
    ]
    .into_iter()
    .map(|(l, a)| {
        let o = Overrides {
            random_budget: (a == Algorithm::Random).then_some(100_000),
            ..Overrides::default()
        };
        experiment(l, a, maze.clone(), MAZE_RUNS, o)
    })
    .collect();
    let spec = ExperimentSpec {
        batch_seed: BATCH_SEED,
        output: dir.join("maze1"),
        experiments,
    };
    run_batch(&spec).unwrap()
}

fn criterion_1(r: &mut Report, s: &BatchSummary) {
    let n = |l: &str| find(s, l).stats.success_count;
    let (ea, nov, safe, rnd) = (n("standard"), n("novelty"), n("safe"), n("random"));
    r.check(
        "1",
        "deceptive maze ordering",
        ea == 0 && nov >= 5 && safe >= 5 && rnd <= 2,
        format!("maze1 successes /{MAZE_RUNS}: standard {ea} (=0), novelty {nov} (>=5), safe {safe} (>=5), random@100k {rnd} (<=2)"),
    );
}

fn function_batch(dir: &std::path::Path) -> BatchSummary {
    let o = Overrides {
        generations: Some(200),
        pop_size: Some(100),
        ..Overrides::default()
    };
    let mut experiments = Vec::new();
    for f in ["rastrigin", "cigar"] {
        let d = Domain::function(f, 10).unwrap();
        for (l, a) in [
            ("standard", Algorithm::Standard),
            ("safe", Algorithm::Safe),
            ("novelty", Algorithm::Novelty),
            ("random", Algorithm::Random),
        ] {
            experiments.push(experiment(&format!("{l}-{f}"), a, d.clone(), 10, o.clone()));
        }
    }
    run_batch(&ExperimentSpec {
        batch_seed: BATCH_SEED,
        output: dir.join("functions"),
        experiments,
    })
    .unwrap()
}

fn criterion_2(r: &mut Report, s: &BatchSummary) {
    let m = |l: &str| find(s, l).stats.mean_best;
    let ras = [
        m("standard-rastrigin"),
        m("safe-rastrigin"),
        m("novelty-rastrigin"),
        m("random-rastrigin"),
    ];
    let cig = [
        m("standard-cigar"),
        m("safe-cigar"),
        m("novelty-cigar"),
        m("random-cigar"),
    ];
    let pass = ras[0] < 100.0
        && ras[1] < 100.0
        && ras[2] > 500.0
        && ras[3] > 500.0
        && cig[0] < 1e6
        && cig[1] < 1e6
        && cig[2] > 1e6
        && cig[3] > 1e6;
    r.check(
        "2",
        "function ordering",
        pass,
        format!(
            "rastrigin-10 mean best ea {:.3} safe {:.3} (<100) novelty {:.1} random {:.1} (>500); cigar-10 ea {:.3e} safe {:.3e} (<1e6) novelty {:.3e} random {:.3e} (>1e6)",
            ras[0], ras[1], ras[2], ras[3], cig[0], cig[1], cig[2], cig[3]
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let mut pass = true;
    for d in [2, 10, 30] {
        pass &= rastrigin(&vec![0.0; d]) == 0.0;
        pass &= rosenbrock(&vec![1.0; d]) == Ok(0.0);
        pass &= cigar(&vec![0.0; d]) == Ok(0.0);
    }
    r.check(
        "3",
        "exact optima",
        pass,
        "D in {2,10,30}, zero tolerance".into(),
    );
}

fn metrics(base_quality: f64, novelty_score: f64) -> SolutionMetrics {
    SolutionMetrics {
        behavior: BehaviorPoint::new(vec![0.0, 0.0]),
        base_quality,
        novelty_score,
        raw_objective: 0.0,
        success: false,
    }
}

fn criterion_4(r: &mut Report) {
    let o = |a, b| ObjectiveGenome { a, b };
    let mut pass = objective_score(&o(1.0, 0.0), &metrics(0.25, 7.0)) == 0.25
        && objective_score(&o(0.0, 1.0), &metrics(0.25, 7.0)) == 7.0
        && objective_score(&o(0.5, 0.5), &metrics(0.5, 10.0)) == 5.25
        && solutions_fitness(&[metrics(0.25, 7.0)], &[o(1.0, 0.0), o(0.0, 1.0)]).unwrap() == [7.0];
    let mut rng = RngStream::new(4);
    for _ in 0..1000 {
        let objs: Vec<_> = (0..rng.index(20) + 1)
            .map(|_| o(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)))
            .collect();
        let ms: Vec<_> = (0..5)
            .map(|_| metrics(rng.uniform(0.0, 1.0), rng.uniform(0.0, 100.0)))
            .collect();
        let fit = solutions_fitness(&ms, &objs).unwrap();
        for (m, f) in ms.iter().zip(&fit) {
            pass &= objs.iter().all(|ob| *f >= objective_score(ob, m));
            pass &= objs.iter().any(|ob| *f == objective_score(ob, m));
        }
    }
    r.check(
        "4",
        "objective score fixtures",
        pass,
        "3 examples, [1,0]/[0,1] max, 1000 random max-dominance cases".into(),
    );
}

/// Sort all distances and average the first k.
fn brute_force(point: &[f64], others: &[Vec<f64>], k: usize) -> f64 {
    let mut d: Vec<f64> = others
        .iter()
        .map(|o| {
            o.iter()
                .zip(point)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = k.min(d.len());
    if n == 0 {
        0.0
    } else {
        d[..n].iter().sum::<f64>() / n as f64
    }
}

fn criterion_5(r: &mut Report) {
    let mut rng = RngStream::new(5);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let dim = 1 + rng.index(4);
        let total = if i < 5 { 1000 } else { 1 + rng.index(1000) };
        let in_archive = rng.index(total + 1);
        let k = 1 + rng.index(30);
        let pts: Vec<Vec<f64>> = (0..total)
            .map(|_| (0..dim).map(|_| rng.uniform(-50.0, 50.0)).collect())
            .collect();
        let archive = NoveltyArchive::restore(
            in_archive.max(1),
            pts[..in_archive]
                .iter()
                .map(|p| (BehaviorPoint::new(p.clone()), 1.0)),
        )
        .unwrap();
        let cohort: Vec<BehaviorPoint> = pts[in_archive..]
            .iter()
            .cloned()
            .map(BehaviorPoint::new)
            .collect();
        let q: Vec<f64> = (0..dim).map(|_| rng.uniform(-50.0, 50.0)).collect();
        let got = knn_novelty(
            &BehaviorPoint::new(q.clone()),
            &cohort,
            &archive,
            &NoveltyParams { k },
        )
        .unwrap();
        worst = worst.max((got - brute_force(&q, &pts, k)).abs());
    }
    r.check(
        "5",
        "novelty oracle equivalence",
        worst <= 1e-9,
        format!("100 instances up to 1000 points, max |diff| {worst:.2e} (<=1e-9)"),
    );
}

fn criterion_6(r: &mut Report) {
    let mut rng = RngStream::new(6);
    let mut pass = true;
    for _ in 0..2 {
        let mut a = NoveltyArchive::new(1000).unwrap();
        let mut last_min = f64::NEG_INFINITY;
        for _ in 0..100_000 {
            let p = BehaviorPoint::new(vec![rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)]);
            a.offer(p, rng.uniform(0.0, 10.0));
            pass &= a.len() <= 1000;
            if a.is_full() {
                let m = a.min_score().unwrap();
                pass &= m >= last_min;
                last_min = m;
            }
        }
    }
    let pt = |x: f64| BehaviorPoint::new(vec![x]);
    let mut a = NoveltyArchive::new(2).unwrap();
    pass &= a.offer(pt(0.0), 1.0) && a.len() == 1;
    pass &= a.offer(pt(1.0), 2.0);
    let scores = |a: &NoveltyArchive| {
        let mut s: Vec<f64> = a.entries().iter().map(|e| e.emergence_score).collect();
        s.sort_by(f64::total_cmp);
        s
    };
    let mut b = a.clone();
    pass &= b.offer(pt(2.0), 1.5) && scores(&b) == [1.5, 2.0];
    let before = a.clone();
    pass &= !a.offer(pt(3.0), 0.5) && a == before;
    r.check(
        "6",
        "archive invariants",
        pass,
        "2 x 1e5 offers at capacity 1000, monotone minimum, 3 replacement examples".into(),
    );
}

fn criterion_7(r: &mut Report) {
    let corridor = parse_maze("S......G\n").unwrap();
    let t = simulate(&corridor, &ControllerGenome::zero(), 300, 2);
    let mut pass =
        t.steps_taken == 5 && t.endpoint == Position::new(5, 0) && t.dist_to_goal == 2 && t.success;

    let open = MazeGrid::new(
        10,
        10,
        vec![Cell::Empty; 100],
        Position::new(0, 0),
        Position::new(7, 7),
    )
    .unwrap();
    let s = sense(&open, Position::new(2, 2)).unwrap();
    pass &= (s.dist_up, s.dist_left, s.dist_down, s.dist_right) == (2, 2, 7, 7);
    pass &= (s.goal_down, s.goal_right, s.goal_up, s.goal_left) == (10.0, 10.0, 0.0, 0.0);

    let mut rng = RngStream::new(7);
    let mut bad = 0;
    for _ in 0..10_000 {
        let (w, h) = (2 + rng.index(23), 1 + rng.index(24));
        let density = rng.uniform(0.0, 0.5);
        let mut cells: Vec<Cell> = (0..w * h)
            .map(|_| {
                if rng.bernoulli(density) {
                    Cell::Wall
                } else {
                    Cell::Empty
                }
            })
            .collect();
        let start = rng.index(w * h);
        let mut goal = rng.index(w * h);
        if goal == start {
            goal = (start + 1) % (w * h);
        }
        cells[start] = Cell::Empty;
        cells[goal] = Cell::Empty;
        let pos = |i: usize| Position::new(i % w, i / w);
        let grid = MazeGrid::new(w, h, cells, pos(start), pos(goal)).unwrap();
        let genes: Vec<f64> = (0..16).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let c = ControllerGenome::from_genes(&genes).unwrap();
        let t = simulate(&grid, &c, rng.index(200), rng.index(3));
        bad += t.path.iter().filter(|p| !grid.is_open(**p)).count();
    }
    pass &= bad == 0;
    r.check(
        "7",
        "simulator fixtures",
        pass,
        format!(
            "corridor 5 steps to col 5, 10x10 sensors, 1e4 fuzz pairs with {bad} illegal positions"
        ),
    );
}

fn criterion_8(r: &mut Report, dir: &std::path::Path) {
    let o = Overrides {
        generations: Some(30),
        pop_size: Some(40),
        ..Overrides::default()
    };
    let spec = |out: &str| ExperimentSpec {
        batch_seed: 8,
        output: dir.join(out),
        experiments: Algorithm::ALL
            .into_iter()
            .flat_map(|a| {
                [
                    experiment(
                        &format!("{a}-maze2"),
                        a,
                        Domain::maze("maze2", None).unwrap(),
                        3,
                        o.clone(),
                    ),
                    experiment(
                        &format!("{a}-rosenbrock"),
                        a,
                        Domain::function("rosenbrock", 5).unwrap(),
                        3,
                        o.clone(),
                    ),
                ]
            })
            .collect(),
    };
    let (a, b) = (spec("det-a"), spec("det-b"));
    run_batch(&a).unwrap();
    run_batch(&b).unwrap();
    let same = |f: &str| {
        std::fs::read(a.output.join(f)).unwrap() == std::fs::read(b.output.join(f)).unwrap()
    };
    r.check(
        "8",
        "determinism",
        same("runs.csv") && same("summary.json"),
        "10 experiments x 3 runs twice: runs.csv and summary.json byte-identical".into(),
    );
}

fn criterion_9(r: &mut Report, s: &BatchSummary) {
    let n = find(s, "fixed-mix").stats.success_count;
    r.check(
        "9",
        "fixed-mix control",
        n >= 5,
        format!("maze1 successes {n}/{MAZE_RUNS} (>=5)"),
    );
}

fn show(v: Option<f64>) -> String {
    v.map_or("absent".into(), |x| format!("{x:.3}"))
}

fn criterion_10(r: &mut Report, s: &BatchSummary, dir: &std::path::Path) {
    let st = &find(s, "safe").stats;
    let json = std::fs::read_to_string(dir.join("maze1/summary.json")).unwrap();
    let emitted = json.contains("\"mean_a\"") && json.contains("\"mean_b\"");
    let in_unit = |v: Option<f64>| v.is_some_and(|x| (0.0..=1.0).contains(&x));
    let pass = emitted && st.success_count > 0 && in_unit(st.mean_a) && in_unit(st.mean_b);
    r.check(
        "10",
        "SAFE coefficient report",
        pass,
        format!(
            "over {} successful runs: mean a {}, mean b {} (in [0,1], in summary.json)",
            st.success_count,
            show(st.mean_a),
            show(st.mean_b)
        ),
    );
}

fn main() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut r = Report { failures: 0 };
    let maze1 = maze1_batch(dir.path());
    criterion_1(&mut r, &maze1);
    criterion_2(&mut r, &function_batch(dir.path()));
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r, dir.path());
    criterion_9(&mut r, &maze1);
    criterion_10(&mut r, &maze1, dir.path());
    println!(
        "acceptance: {} of 10 criteria passed in {:.0}s",
        10 - r.failures,
        start.elapsed().as_secs_f64()
    );
    if r.failures > 0 {
        std::process::exit(1);
    }
}
