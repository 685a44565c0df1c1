//! Failures surfaced by the command-line tool and their exit codes.

use std::fmt;
use std::path::{Path, PathBuf};

use dendroid_core::{Error, VariableSchema};

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or flag combinations (exit 2).
    Usage(String),
    /// A file could not be read, written or parsed (exit 2).
    Input {
        /// The offending file.
        path: PathBuf,
        /// What went wrong, already located (line, column) where possible.
        message: String,
    },
    /// Estimation, fitting or evaluation failed (exit 1).
    Runtime(String),
}

impl Failure {
    /// Process exit status.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Usage(_) | Failure::Input { .. } => 2,
        }
    }

    pub(crate) fn input(path: &Path, message: impl fmt::Display) -> Self {
        Failure::Input {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    pub(crate) fn io(path: &Path, err: std::io::Error) -> Self {
        Failure::input(path, err)
    }

    /// A core error, with vertex ids replaced by variable names.
    pub(crate) fn runtime(err: &Error, schema: &VariableSchema) -> Self {
        Failure::Runtime(describe(err, schema))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Input { path, message } => write!(f, "{}: {message}", path.display()),
            Failure::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for Failure {}

/// Render a core error using variable names instead of vertex ids.
pub fn describe(err: &Error, schema: &VariableSchema) -> String {
    let name = |v: usize| {
        if v < schema.len() {
            format!("`{}`", schema.name(v))
        } else {
            format!("#{v}")
        }
    };
    match err {
        Error::Pair { i, j, source } => {
            format!("pair ({}, {}): {}", name(*i), name(*j), describe(source, schema))
        }
        Error::DegenerateGaussian { column } => {
            format!("Gaussian column {} has zero variance", name(*column))
        }
        Error::SingularCorrelation { i, j } => {
            format!("columns {} and {} are perfectly correlated", name(*i), name(*j))
        }
        other => other.to_string(),
    }
}

/// Render a row-level validation error with its file line and column name.
/// `lines[r]` is the 1-based line of data record `r`.
pub(crate) fn describe_row_error(err: &Error, schema: &VariableSchema, lines: &[u64]) -> String {
    let line = |row: usize| lines.get(row).copied().unwrap_or(row as u64 + 2);
    match err {
        Error::UnknownCategory { row, column, value } => format!(
            "line {}: column `{}`: unknown category `{value}` (expected one of {})",
            line(*row),
            schema.name(*column),
            schema.kind(*column).labels().join(", ")
        ),
        Error::InvalidNumber { row, column, value } => format!(
            "line {}: column `{}`: `{value}` is not a number",
            line(*row),
            schema.name(*column)
        ),
        Error::NonFiniteValue { row, column } => format!(
            "line {}: column `{}`: value is not finite",
            line(*row),
            schema.name(*column)
        ),
        Error::ArityMismatch { row, expected, found } => {
            format!("line {}: expected {expected} cells, found {found}", line(*row))
        }
        other => describe(other, schema),
    }
}
