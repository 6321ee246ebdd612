use serde::Serialize;
use thiserror::Error;

/// Failures surfaced by the command layer. Parse and validation problems
/// exit with 2, numerical failures with 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    exit_code: i32,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> String {
        let obj = ErrorObject {
            error: ErrorBody {
                kind: self.kind(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        };
        serde_json::to_string(&obj).expect("error object serializes")
    }

    /// Prefixes the message with the offending field.
    pub fn in_field(self, field: &str) -> Self {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("field {field}: {m}")),
            CliError::Validation(m) => CliError::Validation(format!("field {field}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("field {field}: {m}")),
            CliError::Io(m) => CliError::Io(m),
        }
    }
}

impl From<specbox_core::Error> for CliError {
    fn from(e: specbox_core::Error) -> Self {
        use specbox_core::Error as E;
        match e {
            E::EigenFailure(_) | E::Pole { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
