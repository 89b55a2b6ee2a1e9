use serde_json::json;
use tplab_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or values outside a routine's domain.
    Usage {
        kind: &'static str,
        message: String,
    },
    /// A check that should hold did not.
    Violation(String),
    NonConvergence(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage {
            kind: "usage",
            message: msg.into(),
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Usage { .. } => 2,
            CliError::NonConvergence(_) => 3,
        }
    }

    pub fn emit(&self) {
        let (kind, message) = match self {
            CliError::Usage { kind, message } => (*kind, message.as_str()),
            CliError::Violation(m) => ("violation", m.as_str()),
            CliError::NonConvergence(m) => ("non-convergence", m.as_str()),
        };
        let body =
            json!({ "error": { "kind": kind, "message": message, "exit_code": self.code() } });
        eprintln!("{body}");
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::NonConvergence(_) => return CliError::NonConvergence(e.to_string()),
            Error::Domain(_) => "domain",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::Pole { .. } => "pole",
            Error::InvalidIndexSet(_) => "invalid-index-set",
            Error::Parse(_) => "parse",
        };
        CliError::Usage {
            kind,
            message: e.to_string(),
        }
    }
}
