use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(String, String),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("missing image for letter {0}")]
    MissingImage(String),
    #[error("degree mismatch for letter {letter}: expected {expected}, got {got}")]
    DegreeMismatch {
        letter: String,
        expected: u32,
        got: u32,
    },
    #[error("series is not primitive (witness word {0})")]
    NotPrimitive(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("degree {0} exceeds truncation {1}")]
    DegreeOverflow(u32, u32),
    #[error("inconsistent system at degree {degree}: rank {rank} of {unknowns} unknowns, residual row {row}")]
    InconsistentSystem {
        degree: u32,
        rank: usize,
        unknowns: usize,
        row: String,
    },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("cache error: {0}")]
    Cache(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
