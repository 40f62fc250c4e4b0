//! CLI error model: a machine-readable issue list for bad input (exit 2)
//! versus runtime failures (exit 3).

use serde::Serialize;

/// One reportable problem, with table coordinates when known.
#[derive(Debug, Clone, Serialize)]
pub struct Issue {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<String>,
}

impl Issue {
    pub fn new(message: impl Into<String>) -> Self {
        Issue {
            message: message.into(),
            row: None,
            column: None,
        }
    }

    pub fn at(message: impl Into<String>, row: Option<usize>, column: Option<String>) -> Self {
        Issue {
            message: message.into(),
            row,
            column,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: config, CSV, or their combination. Exit code 2.
    Validation(Vec<Issue>),
    /// Everything else (I/O, serialization). Exit code 3.
    Runtime(String),
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation(vec![Issue::new(message)])
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    /// The error list as printed on stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct ErrorList<'a> {
            errors: &'a [Issue],
        }
        let issues_storage;
        let issues: &[Issue] = match self {
            CliError::Validation(issues) => issues,
            CliError::Runtime(message) => {
                issues_storage = [Issue::new(message.clone())];
                &issues_storage
            }
        };
        serde_json::to_string(&ErrorList { errors: issues }).expect("issue list serializes")
    }
}

impl From<generank_core::Error> for CliError {
    fn from(err: generank_core::Error) -> Self {
        if err.is_validation() {
            let (row, column) = match &err {
                generank_core::Error::Validation(v) => (v.row, v.column.clone()),
                _ => (None, None),
            };
            CliError::Validation(vec![Issue::at(err.to_string(), row, column)])
        } else {
            CliError::Runtime(err.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(issues) => {
                write!(f, "{} validation issue(s)", issues.len())
            }
            CliError::Runtime(message) => write!(f, "{message}"),
        }
    }
}

impl std::error::Error for CliError {}
