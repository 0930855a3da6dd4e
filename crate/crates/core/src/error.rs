//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty table")]
    EmptyTable,
    #[error("row width {actual} does not match expected {expected}")]
    WidthMismatch { expected: usize, actual: usize },
    #[error("vectors have mismatched lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("unknown column '{0}'")]
    UnknownColumn(String),
    #[error("missing value at row {row}, column '{column}'")]
    MissingValue { row: usize, column: String },
    #[error("negative value {value} at row {row}, column '{column}'")]
    NegativeValue {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("table contains a single class where both are required")]
    SingleClass,
    #[error("class too small: {0}")]
    ClassTooSmall(String),
    #[error("zero median absolute deviation: all error values are equal")]
    ZeroMad,
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("training diverged: non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("no usable ensemble stage: {0}")]
    NotLearnable(String),
    #[error("unknown delivery partner '{0}'")]
    UnknownPartner(String),
    #[error("data leakage: {0}")]
    Leakage(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("unsupported model file: {0}")]
    ModelFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
