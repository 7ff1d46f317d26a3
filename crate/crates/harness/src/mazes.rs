//! Bundled deceptive mazes and maze lookup.

use std::path::Path;

use safe_core::maze::parse_maze;
use safe_core::MazeGrid;

use crate::error::{HarnessError, Result};

pub const MAZE1: &str = include_str!("../mazes/maze1.txt");
pub const MAZE2: &str = include_str!("../mazes/maze2.txt");

/// Text of a bundled maze, by name with or without the `.txt` suffix.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name.strip_suffix(".txt").unwrap_or(name) {
        "maze1" => Some(MAZE1),
        "maze2" => Some(MAZE2),
        _ => None,
    }
}

/// Display name for a maze reference: the file stem.
pub fn maze_name(reference: &str) -> String {
    Path::new(reference)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| reference.to_owned())
}

/// Reads `reference` as a file if one exists (relative paths are tried
/// against `base` first), otherwise falls back to the bundled mazes.
pub fn load_maze_text(reference: &str, base: Option<&Path>) -> Result<String> {
    let mut candidates = Vec::new();
    if let Some(b) = base {
        candidates.push(b.join(reference));
    }
    candidates.push(Path::new(reference).to_path_buf());
    for path in candidates {
        if path.is_file() {
            return std::fs::read_to_string(&path).map_err(|e| HarnessError::io(path, e));
        }
    }
    bundled(reference)
        .map(str::to_owned)
        .ok_or_else(|| HarnessError::UnknownMaze(reference.to_owned()))
}

pub fn load_maze(reference: &str, base: Option<&Path>) -> Result<(String, MazeGrid)> {
    let text = load_maze_text(reference, base)?;
    let name = maze_name(reference);
    let grid = parse_maze(&text).map_err(|source| HarnessError::Maze {
        name: name.clone(),
        source,
    })?;
    Ok((name, grid))
}
