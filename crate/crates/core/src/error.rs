use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front-ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A parameter is outside its declared domain.
    Config,
    /// Input data is malformed, too short or numerically degenerate.
    Data,
    /// A selection stage left nothing to work with.
    Empty,
    /// Filesystem failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Load {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },

    #[error("missing column `{0}` in header")]
    MissingColumn(&'static str),

    #[error("no valid rows in {0}")]
    EmptyInput(String),

    #[error("no tickers survive cleaning (eliminated by `{field}`)")]
    EmptyUniverse { field: &'static str },

    #[error("duplicate ESG records for (ticker, month): {}", .0.join(", "))]
    DuplicateRecords(Vec<String>),

    #[error("invalid date `{0}`: expected YYYY-MM-DD")]
    BadDate(String),

    #[error("invalid month `{0}`: expected YYYY-MM")]
    BadMonth(String),

    #[error("train/test split with fraction {fraction} over {dates} dates leaves an empty window")]
    Split { fraction: f64, dates: usize },

    #[error("no ESG records at or before {0}")]
    EmptySummary(String),

    #[error("{method} selection with parameter {parameter} produced an empty universe")]
    EmptySelection { method: &'static str, parameter: f64 },

    #[error("requested {requested} industries but only {available} are scored")]
    Bounds { requested: usize, available: usize },

    #[error("length mismatch: {left} vs {right}")]
    Shape { left: usize, right: usize },

    #[error("series too short: need at least {needed}, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("regressor is constant; least squares is singular")]
    SingularRegressor,

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("zero-variance returns for ticker {0}")]
    ZeroVariance(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("non-finite price at bar {0}")]
    NonFinitePrice(usize),

    #[error("equity fell to {equity} at bar {bar}; capital exhausted")]
    Accounting { bar: usize, equity: f64 },

    #[error("unknown ticker {0}")]
    UnknownTicker(String),

    #[error("no pairs left after {0}")]
    NoPairs(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Load { .. } => ErrorKind::Io,
            EmptyUniverse { .. } | EmptySelection { .. } | EmptySummary(_) | NoPairs(_) => ErrorKind::Empty,
            Parameter(_) | Split { .. } | Bounds { .. } => ErrorKind::Config,
            _ => ErrorKind::Data,
        }
    }
}
