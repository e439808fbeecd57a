use thiserror::Error;

/// Process exit codes: 0 ok, 1 schema, 2 usage, 3 numeric, 4 verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Schema = 1,
    Usage = 2,
    Numeric = 3,
    Verification = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Numeric(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Schema(_) => ExitCode::Schema,
            CliError::Usage(_) | CliError::Io(_) => ExitCode::Usage,
            CliError::Numeric(_) => ExitCode::Numeric,
        }
    }
}

impl From<curvcones::Error> for CliError {
    fn from(e: curvcones::Error) -> Self {
        use curvcones::Error as E;
        match e {
            E::Schema { .. } | E::Parse(_) => CliError::Schema(e.to_string()),
            E::NoConvergence { .. } | E::Validation { .. } | E::Eval(_) | E::PointRejected(_) => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
