use thiserror::Error;

/// Failures of a harness run, grouped by exit status.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Malformed or out-of-range configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] mflow::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A results file that does not follow the CSV schema.
    #[error("malformed results file: {0}")]
    Parse(String),
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    /// 2 for validation failures, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Parse(_) => 2,
            HarnessError::Core(e) => core_exit_code(e),
            HarnessError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

fn core_exit_code(e: &mflow::Error) -> i32 {
    use mflow::Error::*;
    match e {
        Validation(_) | Unsupported(_) => 2,
        Replica { source, .. } => core_exit_code(source),
        Domain(_) | Explosion { .. } | Numerical(_) | Truncation(_) => 3,
    }
}

pub(crate) fn config_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}
