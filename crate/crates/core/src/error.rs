use std::fmt;

use thiserror::Error;

/// Category of a failed linear solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverFailureKind {
    PreCheckFailed,
    DidNotConverge,
    InfOrNan,
    PostCheckFailed,
    UnknownType,
    ShapeMismatch,
}

impl SolverFailureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverFailureKind::PreCheckFailed => "pre_check_failed",
            SolverFailureKind::DidNotConverge => "did_not_converge",
            SolverFailureKind::InfOrNan => "inf_or_nan",
            SolverFailureKind::PostCheckFailed => "post_check_failed",
            SolverFailureKind::UnknownType => "unknown_type",
            SolverFailureKind::ShapeMismatch => "shape_mismatch",
        }
    }
}

impl fmt::Display for SolverFailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A linear solver failure. Every failure carries a [`SolverFailureKind`].
#[derive(Debug, Clone, PartialEq, Error)]
#[error("linear solver failed ({kind}): {message}")]
pub struct SolverFailure {
    pub kind: SolverFailureKind,
    pub message: String,
}

impl SolverFailure {
    pub fn new(kind: SolverFailureKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("size error: requested {requested} entries but only {available} available")]
    Size { requested: usize, available: usize },

    #[error("ini parse error on line {line}: {message}")]
    Ini { line: usize, message: String },

    #[error("missing key '{0}'")]
    MissingKey(String),

    #[error("invalid value for key '{key}': {source}")]
    Value {
        key: String,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid grid specification: {0}")]
    Spec(String),

    #[error("unknown {kind} '{id}', available: {}", available.join(", "))]
    Factory {
        kind: &'static str,
        id: String,
        available: Vec<String>,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("index {index} out of range for size {size}")]
    Index { index: usize, size: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("entry ({row}, {col}) is not contained in the sparsity pattern")]
    NotInPattern { row: usize, col: usize },

    #[error(transparent)]
    Solver(#[from] SolverFailure),

    #[error("{0}")]
    Projection(String),

    #[error("expression error at position {position}: {message}")]
    Expression { position: usize, message: String },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("not supported: {0}")]
    Capability(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attaches the config key the error arose from.
    pub fn with_key(self, key: &str) -> Self {
        match self {
            e @ (Error::MissingKey(_) | Error::Value { .. }) => e,
            e => Error::Value {
                key: key.to_string(),
                source: Box::new(e),
            },
        }
    }

    /// The solver failure kind, if this error originates from a linear solve.
    pub fn solver_failure_kind(&self) -> Option<SolverFailureKind> {
        match self {
            Error::Solver(failure) => Some(failure.kind),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
