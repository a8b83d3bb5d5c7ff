use thiserror::Error;

/// Errors produced by every operation in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GainError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate year label `{0}`")]
    DuplicateYear(String),

    #[error("input contains no data rows")]
    EmptyInput,

    #[error("unknown factor code `{value}` in column {column} at line {line}")]
    UnknownCode {
        line: usize,
        column: String,
        value: String,
    },

    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("score does not change sign over [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Validation(String),
}

pub type Result<T, E = GainError> = std::result::Result<T, E>;

pub(crate) fn ensure_len(got: usize, needed: usize) -> Result<()> {
    if got < needed {
        Err(GainError::TooShort { needed, got })
    } else {
        Ok(())
    }
}
