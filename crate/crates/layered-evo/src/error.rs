use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid genome: {0}")]
    InvalidGenome(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("world generation failed: {0}")]
    WorldGeneration(String),

    #[error("unknown experiment `{0}`; run `list` to see the registry")]
    UnknownExperiment(String),

    #[error("unknown task `{0}`")]
    UnknownTask(String),

    #[error("stage order violated: {0}")]
    StageOrder(String),

    #[error("task `{task}` is incompatible with this genome: {reason}")]
    TaskMismatch { task: String, reason: String },

    #[error("malformed history file {path}: {reason}")]
    MalformedHistory { path: PathBuf, reason: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    pub fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json { context: context.into(), source }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownExperiment(_) | Error::UnknownTask(_) | Error::InvalidConfig(_) => 2,
            Error::StageOrder(_) => 3,
            _ => 4,
        }
    }
}
