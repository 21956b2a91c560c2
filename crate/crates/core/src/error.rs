use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ring descriptor mismatch: {0}")]
    RingMismatch(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("substitution for `{variable}`: {reason}")]
    Substitution { variable: String, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(
        "truncation {truncation} is too small for degree {max_degree}: \
         need at least {required} (max degree + 2)"
    )]
    InsufficientTruncation {
        truncation: u32,
        max_degree: u32,
        required: u32,
    },

    #[error("series error: {0}")]
    Series(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
