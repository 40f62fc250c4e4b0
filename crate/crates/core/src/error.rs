//! Error types shared across the engine.

use thiserror::Error;

/// A validation failure with optional table coordinates.
///
/// `row` is 1-based (data rows, header excluded); `column` is the feature
/// name when known. Both are carried so front ends can report machine
/// readable locations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationError {
    pub message: String,
    pub row: Option<usize>,
    pub column: Option<String>,
}

impl ValidationError {
    pub fn new(message: impl Into<String>) -> Self {
        ValidationError {
            message: message.into(),
            row: None,
            column: None,
        }
    }

    pub fn at_row(mut self, row: usize) -> Self {
        self.row = Some(row);
        self
    }

    pub fn at_column(mut self, column: impl Into<String>) -> Self {
        self.column = Some(column.into());
        self
    }
}

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)?;
        if let Some(col) = &self.column {
            write!(f, " (column '{col}'")?;
            if let Some(row) = self.row {
                write!(f, ", row {row}")?;
            }
            write!(f, ")")?;
        } else if let Some(row) = self.row {
            write!(f, " (row {row})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0}")]
    Validation(#[from] ValidationError),

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("replicator update degenerate: total gene fitness is not positive")]
    DegenerateUpdate,
}

impl Error {
    pub fn validation(message: impl Into<String>) -> Self {
        Error::Validation(ValidationError::new(message))
    }

    /// True for errors caused by bad input rather than runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Dimension { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
