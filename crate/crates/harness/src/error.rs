use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("maze {name}: {source}")]
    Maze {
        name: String,
        #[source]
        source: safe_core::maze::MazeError,
    },
    #[error("maze {0:?} is neither a readable file nor a bundled maze (maze1, maze2)")]
    UnknownMaze(String),
    #[error(transparent)]
    Core(#[from] safe_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("trajectory does not fit the maze: {0}")]
    TrajectoryMismatch(String),
    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
