use poset_rescue::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid game: {0}")]
    Validation(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn from_json(err: &serde_json::Error) -> CliError {
        CliError::Parse {
            line: err.line(),
            column: err.column(),
            message: strip_position(&err.to_string()),
        }
    }

    /// 0 success, 1 bad input, 2 failed assumption, 3 size guard, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

fn strip_position(text: &str) -> String {
    match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text.to_string(),
    }
}

pub fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::Cycle(_)
        | Error::UnknownElement(_)
        | Error::DuplicateElement(_)
        | Error::ElementMismatch
        | Error::InvalidModel(_) => 1,
        Error::SizeLimit { .. } => 3,
        Error::InfeasibleDual
        | Error::InfeasibleFlow(_)
        | Error::Unbounded
        | Error::Internal(_)
        | Error::EmptyMatrix => 4,
        Error::ZeroCondition
        | Error::NotCoindependent
        | Error::NotReducible(_)
        | Error::IllegalSearch
        | Error::EmptyStage(_)
        | Error::NotOrdinalSum
        | Error::WeightTooLarge(_)
        | Error::WeightTooSmall(_)
        | Error::WrongCorrelationClass(_)
        | Error::NotIndependentCenter
        | Error::PreconditionViolated(_)
        | Error::WrongStructure(_) => 2,
    }
}
