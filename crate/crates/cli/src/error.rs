use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Budget(_) => exit::BUDGET,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Other(_) => exit::FAILURE,
        }
    }
}

impl From<ldpost::Error> for CliError {
    fn from(e: ldpost::Error) -> Self {
        use ldpost::Error as E;
        match e {
            E::BudgetExceeded { .. } | E::TooExpensive { .. } => CliError::Budget(e.to_string()),
            E::NonFiniteGradient { .. } => CliError::Numerical(e.to_string()),
            E::InvalidConfig(_)
            | E::KindUnsupported(_)
            | E::DimensionUnsupported { .. }
            | E::IndexTooLarge(_)
            | E::WrongDimension { .. }
            | E::Parse { .. }
            | E::OutOfUnitCube { .. }
            | E::RaggedInput { .. }
            | E::EmptyInput
            | E::DirectionTable { .. } => CliError::Usage(e.to_string()),
            other => CliError::Other(other.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(e.into())
    }
}
