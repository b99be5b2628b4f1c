use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown objective `{0}`")]
    UnknownObjective(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("finite-difference oracle failed at coordinate {coordinate}: non-finite objective value")]
    OracleFailure { coordinate: usize },

    #[error("line search failed: {0}")]
    LineSearch(#[from] crate::linesearch::LineSearchError),

    #[error("inconsistent optimizer configuration: {0}")]
    Config(String),

    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config error in cell `{cell}`: {message}")]
    ConfigCell { cell: String, message: String },

    #[error("malformed trace csv at line {line}: {message}")]
    TraceFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
