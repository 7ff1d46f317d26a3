use crate::evo::EvoError;
use crate::functions::FunctionError;
use crate::maze::MazeError;
use crate::novelty::NoveltyError;

/// Any error produced by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Evo(#[from] EvoError),
    #[error(transparent)]
    Maze(#[from] MazeError),
    #[error(transparent)]
    Novelty(#[from] NoveltyError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    /// A run configuration that cannot be executed.
    #[error("invalid run configuration: {0}")]
    Config(alloc::string::String),
}
