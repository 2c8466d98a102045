use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("coordinate {0} is outside the allowed alphabet")]
    InvalidCoordinate(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} needs {required}, budget is {budget}")]
    BudgetExceeded { what: &'static str, required: u128, budget: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate norm: {0}")]
    DegenerateNorm(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// A search that is guaranteed to succeed on valid input came back empty.
    /// Either the input was accepted wrongly or the implementation is broken.
    #[error("internal defect: {0}")]
    Defect(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage { stage, source: Box::new(source) }
    }

    pub fn is_budget(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } => true,
            Error::Stage { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}
