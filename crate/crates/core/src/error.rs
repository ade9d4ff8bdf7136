use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty mapping table")]
    EmptyMappingTable,

    #[error("empty table")]
    EmptyTable,

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: u64, got: u64 },

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("degenerate runs test: {above} above and {below} below the expectation; needs both sides and more than one class on one of them")]
    DegenerateRuns { above: usize, below: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("expected frequency {expected} in class {class} is not positive; pool classes first")]
    PoolClassesFirst { class: String, expected: f64 },

    #[error("no feasible parameters for {0}")]
    NoFeasibleParameters(String),

    #[error("combined variance {combined} is not positive ({first}: {v1}, {second}: {v2})")]
    NonPositiveVariance {
        first: String,
        second: String,
        v1: f64,
        v2: f64,
        combined: f64,
    },

    #[error("need at least 2 letters, got {0}")]
    TooFewLetters(usize),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid mapping table: {0}")]
    InvalidMapping(String),

    #[error("invalid frequency table: {0}")]
    InvalidTable(String),

    #[error("invalid alphabet:\n{}", .0.join("\n"))]
    InvalidAlphabet(Vec<String>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}:{line}: {message}")]
    Syntax {
        origin: String,
        line: u64,
        message: String,
    },

    #[error("{origin}: {source}")]
    InFile {
        origin: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn syntax(origin: &str, line: u64, message: impl Into<String>) -> Self {
        Error::Syntax {
            origin: origin.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_file(origin: &str, source: Error) -> Self {
        match source {
            e @ (Error::Syntax { .. } | Error::Io { .. } | Error::InFile { .. }) => e,
            e => Error::InFile {
                origin: origin.to_string(),
                source: Box::new(e),
            },
        }
    }
}
