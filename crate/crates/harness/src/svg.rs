//! SVG rendering of a maze with a robot path.

use std::fmt::Write;

use safe_core::maze::{Cell, MazeGrid, Position, Trajectory};

use crate::error::{HarnessError, Result};

const CELL: usize = 8;

/// Walls as filled cells, start and goal as circles, path as a polyline
/// through cell centers (omitted when the path has a single point).
pub fn render_trajectory_svg(grid: &MazeGrid, t: &Trajectory) -> Result<String> {
    check(grid, t)?;
    let (w, h) = (grid.width(), grid.height());
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {w} {h}">"#,
        w * CELL,
        h * CELL
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
    );
    let _ = writeln!(s, r#"<g fill="black">"#);
    for row in 0..h {
        let mut col = 0;
        while col < w {
            if grid.cell(Position::new(col, row)) != Some(Cell::Wall) {
                col += 1;
                continue;
            }
            let run_start = col;
            while col < w && grid.cell(Position::new(col, row)) == Some(Cell::Wall) {
                col += 1;
            }
            let _ = writeln!(
                s,
                r#"<rect x="{run_start}" y="{row}" width="{}" height="1"/>"#,
                col - run_start
            );
        }
    }
    let _ = writeln!(s, "</g>");
    if t.path.len() >= 2 {
        let points: Vec<String> = t
            .path
            .iter()
            .map(|p| format!("{}.5,{}.5", p.col, p.row))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="blue" stroke-width="0.3"/>"#,
            points.join(" ")
        );
    }
    for (p, color) in [(grid.start(), "green"), (grid.goal(), "red")] {
        let _ = writeln!(
            s,
            r#"<circle cx="{}.5" cy="{}.5" r="0.8" fill="{color}"/>"#,
            p.col, p.row
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn check(grid: &MazeGrid, t: &Trajectory) -> Result<()> {
    let Some(first) = t.path.first() else {
        return Err(HarnessError::TrajectoryMismatch("empty path".into()));
    };
    if *first != grid.start() {
        return Err(HarnessError::TrajectoryMismatch(format!(
            "path starts at ({},{}) but the maze starts at ({},{})",
            first.col,
            first.row,
            grid.start().col,
            grid.start().row
        )));
    }
    for p in &t.path {
        if !grid.is_open(*p) {
            return Err(HarnessError::TrajectoryMismatch(format!(
                "({},{}) is a wall or outside the {}x{} grid",
                p.col,
                p.row,
                grid.width(),
                grid.height()
            )));
        }
    }
    Ok(())
}
