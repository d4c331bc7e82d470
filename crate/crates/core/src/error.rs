use std::fmt;

use thiserror::Error;

use crate::syntax::{NodePath, Operator};

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used for exit codes and for deciding whether a
/// failed probe still carries sign information.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Parse,
    Domain,
    Convergence,
    Ambiguity,
    Precision,
    Resource,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ErrorKind::Parse => "ParseError",
            ErrorKind::Domain => "DomainError",
            ErrorKind::Convergence => "ConvergenceError",
            ErrorKind::Ambiguity => "AmbiguityError",
            ErrorKind::Precision => "PrecisionError",
            ErrorKind::Resource => "ResourceError",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("convergence error: {0}")]
    Convergence(String),

    #[error("ambiguity error: {0}")]
    Ambiguity(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("resource error: {0}")]
    Resource(String),

    /// An intermediate magnitude exceeded the blow-up cap. Reported as a
    /// resource error, but callers that know the function is increasing may
    /// read it as "larger than any representable target".
    #[error("resource error: magnitude above 2^{bits} ({context})")]
    Overflow { bits: u64, context: String },

    #[error("{source} [at node {path}, operator `{op}`]")]
    At {
        path: NodePath,
        op: Operator,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Domain(_) => ErrorKind::Domain,
            Error::Convergence(_) => ErrorKind::Convergence,
            Error::Ambiguity(_) => ErrorKind::Ambiguity,
            Error::Precision(_) => ErrorKind::Precision,
            Error::Resource(_) | Error::Overflow { .. } => ErrorKind::Resource,
            Error::At { source, .. } => source.kind(),
        }
    }

    /// True when the innermost cause is a magnitude blow-up.
    pub fn is_overflow(&self) -> bool {
        match self {
            Error::Overflow { .. } => true,
            Error::At { source, .. } => source.is_overflow(),
            _ => false,
        }
    }

    /// Innermost node path, if the error was raised while evaluating a term.
    pub fn path(&self) -> Option<&NodePath> {
        match self {
            Error::At { path, source, .. } => source.path().or(Some(path)),
            _ => None,
        }
    }

    pub(crate) fn at(self, path: &NodePath, op: Operator) -> Self {
        match self {
            // keep the innermost location only
            e @ Error::At { .. } => e,
            e => Error::At {
                path: path.clone(),
                op,
                source: Box::new(e),
            },
        }
    }
}
