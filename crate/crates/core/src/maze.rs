//! Grid maze and the sensor-driven robot that wanders it.
//!
//! Coordinates are `(col, row)` with the origin at the top-left cell; rows
//! grow downward, so "up" means decreasing row. Distances between cells are
//! taxicab.
//!
//! Each step the robot reads eight sensors (free cells to the nearest wall or
//! boundary in the four cardinal directions, and a quadrant indicator for the
//! goal), forms two weighted sums `h` and `v` from its 16 weights, then moves
//! one cell horizontally (right if `h >= 0`, else left) and one cell
//! vertically (down if `v >= 0`, else up). A move into a wall or off the grid
//! is skipped. The vertical move is checked from the cell reached by the
//! horizontal one.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::evo::{Bounds, Genome};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MazeError {
    #[error("maze text is empty")]
    Empty,
    #[error("line {line}: expected {expected} columns, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: unknown character {ch:?}")]
    UnknownChar {
        line: usize,
        column: usize,
        ch: char,
    },
    #[error("line {line}, column {column}: duplicate start 'S'")]
    DuplicateStart { line: usize, column: usize },
    #[error("line {line}, column {column}: duplicate goal 'G'")]
    DuplicateGoal { line: usize, column: usize },
    #[error("maze has no start 'S'")]
    MissingStart,
    #[error("maze has no goal 'G'")]
    MissingGoal,
    #[error("start and goal coincide")]
    StartIsGoal,
    #[error("cell grid has {found} cells, expected {expected}")]
    CellCount { expected: usize, found: usize },
    #[error("position ({col}, {row}) is outside the grid or on a wall")]
    BlockedPosition { col: usize, row: usize },
    #[error("a controller needs exactly 16 weights, got {0}")]
    ControllerLength(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Wall,
    Empty,
}

/// A cell coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Position {
    pub col: usize,
    pub row: usize,
}

impl Position {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }
}

/// Taxicab distance.
pub fn manhattan(p: Position, q: Position) -> usize {
    p.col.abs_diff(q.col) + p.row.abs_diff(q.row)
}

// Free-run lengths per cell, indexed by direction.
const UP: usize = 0;
const DOWN: usize = 1;
const LEFT: usize = 2;
const RIGHT: usize = 3;

/// A rectangular maze with one start and one goal cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MazeGrid {
    width: usize,
    height: usize,
    cells: Vec<Cell>,
    start: Position,
    goal: Position,
    runs: Vec<[u32; 4]>,
}

impl MazeGrid {
    /// Builds a grid from row-major cells.
    pub fn new(
        width: usize,
        height: usize,
        cells: Vec<Cell>,
        start: Position,
        goal: Position,
    ) -> Result<Self, MazeError> {
        if width == 0 || height == 0 {
            return Err(MazeError::Empty);
        }
        if cells.len() != width * height {
            return Err(MazeError::CellCount {
                expected: width * height,
                found: cells.len(),
            });
        }
        let mut grid = Self {
            width,
            height,
            cells,
            start,
            goal,
            runs: Vec::new(),
        };
        for p in [start, goal] {
            if !grid.is_open(p) {
                return Err(MazeError::BlockedPosition {
                    col: p.col,
                    row: p.row,
                });
            }
        }
        if start == goal {
            return Err(MazeError::StartIsGoal);
        }
        grid.runs = grid.free_runs();
        Ok(grid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn start(&self) -> Position {
        self.start
    }

    pub fn goal(&self) -> Position {
        self.goal
    }

    pub fn cell(&self, p: Position) -> Option<Cell> {
        (p.col < self.width && p.row < self.height).then(|| self.cells[self.idx(p)])
    }

    /// In bounds and not a wall.
    pub fn is_open(&self, p: Position) -> bool {
        self.cell(p) == Some(Cell::Empty)
    }

    #[inline]
    fn idx(&self, p: Position) -> usize {
        p.row * self.width + p.col
    }

    fn open_at(&self, col: usize, row: usize) -> bool {
        self.cells[row * self.width + col] == Cell::Empty
    }

    fn free_runs(&self) -> Vec<[u32; 4]> {
        let (w, h) = (self.width, self.height);
        let mut runs = alloc::vec![[0u32; 4]; w * h];
        for row in 0..h {
            for col in 0..w {
                let i = row * w + col;
                if col > 0 && self.open_at(col - 1, row) {
                    runs[i][LEFT] = runs[i - 1][LEFT] + 1;
                }
                if row > 0 && self.open_at(col, row - 1) {
                    runs[i][UP] = runs[i - w][UP] + 1;
                }
            }
        }
        for row in (0..h).rev() {
            for col in (0..w).rev() {
                let i = row * w + col;
                if col + 1 < w && self.open_at(col + 1, row) {
                    runs[i][RIGHT] = runs[i + 1][RIGHT] + 1;
                }
                if row + 1 < h && self.open_at(col, row + 1) {
                    runs[i][DOWN] = runs[i + w][DOWN] + 1;
                }
            }
        }
        runs
    }
}

impl fmt::Display for MazeGrid {
    /// The text format accepted by [`parse_maze`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.height {
            for col in 0..self.width {
                let p = Position::new(col, row);
                let c = if p == self.start {
                    'S'
                } else if p == self.goal {
                    'G'
                } else if self.cells[self.idx(p)] == Cell::Wall {
                    '#'
                } else {
                    '.'
                };
                write!(f, "{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parses the ASCII maze format: one line per row, `#` wall, `.` empty,
/// `S` start, `G` goal. The final newline is optional; `\r\n` is accepted.
pub fn parse_maze(text: &str) -> Result<MazeGrid, MazeError> {
    let mut width = None;
    let mut cells = Vec::new();
    let mut start = None;
    let mut goal = None;
    let mut height = 0;
    for (r, line) in text.lines().enumerate() {
        let mut count = 0;
        for (c, ch) in line.chars().enumerate() {
            let pos = Position::new(c, r);
            let cell = match ch {
                '#' => Cell::Wall,
                '.' => Cell::Empty,
                'S' => {
                    if start.replace(pos).is_some() {
                        return Err(MazeError::DuplicateStart {
                            line: r + 1,
                            column: c + 1,
                        });
                    }
                    Cell::Empty
                }
                'G' => {
                    if goal.replace(pos).is_some() {
                        return Err(MazeError::DuplicateGoal {
                            line: r + 1,
                            column: c + 1,
                        });
                    }
                    Cell::Empty
                }
                other => {
                    return Err(MazeError::UnknownChar {
                        line: r + 1,
                        column: c + 1,
                        ch: other,
                    })
                }
            };
            cells.push(cell);
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(MazeError::Ragged {
                    line: r + 1,
                    expected: w,
                    found: count,
                })
            }
            _ => {}
        }
        height += 1;
    }
    let width = match width {
        Some(w) if w > 0 => w,
        _ => return Err(MazeError::Empty),
    };
    let start = start.ok_or(MazeError::MissingStart)?;
    let goal = goal.ok_or(MazeError::MissingGoal)?;
    MazeGrid::new(width, height, cells, start, goal)
}

/// The 16 controller weights: `p[0..8]` drive `h`, `p[8..16]` drive `v`.
///
/// Within each half the weights multiply, in order: distRight, goalRight,
/// distLeft, goalLeft, distDown, goalDown, distUp, goalUp.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ControllerGenome {
    pub p: [f64; 16],
}

impl ControllerGenome {
    pub const LEN: usize = 16;

    pub fn bounds() -> alloc::sync::Arc<[Bounds]> {
        Bounds::uniform(Self::LEN, -1.0, 1.0)
    }

    pub fn from_genes(genes: &[f64]) -> Result<Self, MazeError> {
        let p: [f64; 16] = genes
            .try_into()
            .map_err(|_| MazeError::ControllerLength(genes.len()))?;
        Ok(Self { p })
    }

    pub fn zero() -> Self {
        Self { p: [0.0; 16] }
    }
}

impl TryFrom<&Genome> for ControllerGenome {
    type Error = MazeError;

    fn try_from(g: &Genome) -> Result<Self, MazeError> {
        Self::from_genes(g.genes())
    }
}

/// What the robot perceives at one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorReading {
    pub dist_up: u32,
    pub dist_down: u32,
    pub dist_left: u32,
    pub dist_right: u32,
    pub goal_up: f64,
    pub goal_down: f64,
    pub goal_left: f64,
    pub goal_right: f64,
}

/// Sensor values at `pos`. Fails if `pos` is a wall or outside the grid.
pub fn sense(grid: &MazeGrid, pos: Position) -> Result<SensorReading, MazeError> {
    if !grid.is_open(pos) {
        return Err(MazeError::BlockedPosition {
            col: pos.col,
            row: pos.row,
        });
    }
    Ok(sense_open(grid, pos))
}

#[inline]
fn sense_open(grid: &MazeGrid, pos: Position) -> SensorReading {
    let run = grid.runs[grid.idx(pos)];
    let goal = grid.goal;
    let (ht, wd) = (grid.height as f64, grid.width as f64);
    // A goal sharing the robot's row (column) lights neither horizontal
    // (vertical) indicator.
    SensorReading {
        dist_up: run[UP],
        dist_down: run[DOWN],
        dist_left: run[LEFT],
        dist_right: run[RIGHT],
        goal_up: if goal.row < pos.row { ht } else { 0.0 },
        goal_down: if goal.row > pos.row { ht } else { 0.0 },
        goal_left: if goal.col < pos.col { wd } else { 0.0 },
        goal_right: if goal.col > pos.col { wd } else { 0.0 },
    }
}

/// Horizontal and vertical drive values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSignal {
    pub h: f64,
    pub v: f64,
}

pub fn compute_drive(s: &SensorReading, c: &ControllerGenome) -> DriveSignal {
    let x = [
        s.dist_right as f64,
        s.goal_right,
        s.dist_left as f64,
        s.goal_left,
        s.dist_down as f64,
        s.goal_down,
        s.dist_up as f64,
        s.goal_up,
    ];
    let dot = |w: &[f64]| w.iter().zip(x.iter()).map(|(a, b)| a * b).sum::<f64>();
    DriveSignal {
        h: dot(&c.p[..8]),
        v: dot(&c.p[8..]),
    }
}

/// One move from `pos`. `pos` must be open; a blocked move leaves the
/// coordinate unchanged.
pub fn step(grid: &MazeGrid, pos: Position, c: &ControllerGenome) -> Position {
    let d = compute_drive(&sense_open(grid, pos), c);
    let run = grid.runs[grid.idx(pos)];
    let mut next = pos;
    if d.h >= 0.0 {
        if run[RIGHT] > 0 {
            next.col += 1;
        }
    } else if run[LEFT] > 0 {
        next.col -= 1;
    }
    let run = grid.runs[grid.idx(next)];
    if d.v >= 0.0 {
        if run[DOWN] > 0 {
            next.row += 1;
        }
    } else if run[UP] > 0 {
        next.row -= 1;
    }
    next
}

/// A complete simulated path.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    /// Every visited position, starting with the start cell.
    pub path: Vec<Position>,
    pub endpoint: Position,
    pub dist_to_goal: usize,
    pub steps_taken: usize,
    pub success: bool,
}

/// Where a simulation ended, without the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub endpoint: Position,
    pub dist_to_goal: usize,
    pub steps_taken: usize,
    pub success: bool,
}

fn run(
    grid: &MazeGrid,
    c: &ControllerGenome,
    max_steps: usize,
    stop_distance: usize,
    mut visit: impl FnMut(Position),
) -> Outcome {
    let mut pos = grid.start;
    visit(pos);
    let mut steps = 0;
    let mut dist = manhattan(pos, grid.goal);
    while dist > stop_distance && steps < max_steps {
        pos = step(grid, pos, c);
        visit(pos);
        steps += 1;
        dist = manhattan(pos, grid.goal);
    }
    Outcome {
        endpoint: pos,
        dist_to_goal: dist,
        steps_taken: steps,
        success: dist <= stop_distance,
    }
}

/// Runs the controller from the start cell for at most `max_steps` steps,
/// halting as soon as the robot is within `stop_distance` of the goal.
pub fn simulate(
    grid: &MazeGrid,
    c: &ControllerGenome,
    max_steps: usize,
    stop_distance: usize,
) -> Trajectory {
    let mut path = Vec::with_capacity(max_steps.min(1024) + 1);
    let o = run(grid, c, max_steps, stop_distance, |p| path.push(p));
    Trajectory {
        path,
        endpoint: o.endpoint,
        dist_to_goal: o.dist_to_goal,
        steps_taken: o.steps_taken,
        success: o.success,
    }
}

/// [`simulate`] without recording the path.
pub fn simulate_outcome(
    grid: &MazeGrid,
    c: &ControllerGenome,
    max_steps: usize,
    stop_distance: usize,
) -> Outcome {
    run(grid, c, max_steps, stop_distance, |_| {})
}

/// Path as `col,row` lines under a `col,row` header.
pub fn trajectory_csv(t: &Trajectory) -> String {
    use core::fmt::Write;
    let mut out = String::from("col,row\n");
    for p in &t.path {
        let _ = writeln!(out, "{},{}", p.col, p.row);
    }
    out
}
