use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid plumbing graph: {0}")]
    Validation(String),

    #[error("intersection form is not negative definite: leading minor of order {order} is {value}")]
    NotNegativeDefinite { order: usize, value: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("complex would have {cells} cells, exceeding the limit of {limit}")]
    Capacity { cells: u64, limit: u64 },

    #[error("barcode has no infinite bar; the truncation box is too small")]
    MissingFreePart,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("upsilon lies below the disk bound at t = {t} for k' = {k:?}: {value} < {bound}")]
    AuditFailure { k: Vec<i64>, t: String, value: String, bound: String },

    #[error("exactness check `{check}` failed: {detail}")]
    Exactness { check: String, detail: String },

    #[error("grading mismatch in relation for vertex {vertex} at k = {k:?}: {detail}")]
    GradingMismatch { vertex: String, k: Vec<i64>, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::InvalidParams(_)
            | Error::Hypothesis(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::NotNegativeDefinite { .. } => 3,
            Error::Capacity { .. } | Error::MissingFreePart => 4,
            Error::Exactness { .. } | Error::AuditFailure { .. } | Error::GradingMismatch { .. } => 5,
        }
    }
}
