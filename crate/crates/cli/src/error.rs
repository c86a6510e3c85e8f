use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// At least one run hit the overflow guard and was cut short.
    Truncated,
    /// At least one invariant or tolerance check failed.
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Truncated => 3,
            Status::Failed => 4,
        }
    }

    /// The more severe of two outcomes.
    pub fn merge(self, other: Status) -> Status {
        match (self, other) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Truncated, _) | (_, Status::Truncated) => Status::Truncated,
            _ => Status::Ok,
        }
    }
}

macro_rules! numeric_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Numeric(e.to_string())
            }
        })*
    };
}

numeric_from!(
    nagd_core::spectral::SpectralError,
    nagd_core::dynamics::DynamicsError,
    nagd_core::analysis::AnalysisError,
    nagd_core::special::SpecialError,
    nagd_core::linalg::LinalgError
);

impl From<nagd_core::game::GameError> for CliError {
    fn from(e: nagd_core::game::GameError) -> Self {
        match e {
            nagd_core::game::GameError::InvalidGame(m) => CliError::Config(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}
