use thiserror::Error;

/// Exit codes of the `monolab` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const MEASURE_UNDEFINED: i32 = 3;
    pub const NO_SIGN_CHANGE: i32 = 4;
    pub const VIOLATION: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] monolab_core::Error),

    #[error("{count} violation(s) found by suite '{tag}' (worst margin {worst:.6e})")]
    Violation {
        tag: String,
        count: usize,
        worst: f64,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        use monolab_core::Error as E;
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Violation { .. } => exit::VIOLATION,
            Self::Io { .. } => exit::FAILURE,
            Self::Core(e) => match e {
                E::MeasureUndefined(_) => exit::MEASURE_UNDEFINED,
                E::NoBracketedCrossing { .. } => exit::NO_SIGN_CHANGE,
                E::InvalidArgument(_)
                | E::InvalidSubsystems(_)
                | E::DimensionMismatch(_)
                | E::InvalidState(_)
                | E::NotHermitian(_)
                | E::Serialization(_) => exit::USAGE,
                E::NoConvergence(_) => exit::FAILURE,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
