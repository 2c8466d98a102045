use thiserror::Error;

/// Process exit codes.
pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] kottsep_core::Error),

    /// A certificate or claim did not survive re-checking.
    #[error("falsified: {0}")]
    Falsified(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use kottsep_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Falsified(_) => EXIT_FALSIFIED,
            CliError::Core(e) if e.is_budget() => EXIT_BUDGET,
            CliError::Core(e) => match innermost(e) {
                E::VerificationFailed(_) | E::Defect(_) => EXIT_FALSIFIED,
                _ => EXIT_USAGE,
            },
        }
    }
}

fn innermost(e: &kottsep_core::Error) -> &kottsep_core::Error {
    match e {
        kottsep_core::Error::Stage { source, .. } => innermost(source),
        other => other,
    }
}

pub type CliResult<T> = Result<T, CliError>;
