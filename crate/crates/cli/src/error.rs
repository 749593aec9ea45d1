use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(epr_ga::Error),

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    /// 2 for anything the caller can fix by changing flags, 3 for numerical
    /// singularities and non-dichotomic outcomes.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Output { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Serialize(_) => 1,
        }
    }
}

impl From<epr_ga::Error> for CliError {
    fn from(e: epr_ga::Error) -> Self {
        use epr_ga::Error as E;
        match e {
            E::NonUnitDirection { .. }
            | E::DegenerateDirection
            | E::InvalidStep { .. }
            | E::ZeroTrials
            | E::NoSettings => CliError::Validation(e.to_string()),
            E::NonFinite | E::Singular { .. } | E::NonDichotomic { .. } => CliError::Numerical(e),
        }
    }
}
