use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A token in textual input could not be accepted.
    #[error("invalid token `{token}`: {reason}")]
    Parse { token: String, reason: &'static str },

    #[error("empty input")]
    EmptyInput,

    /// Input that parsed but violates a documented requirement.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A precondition of an operation was not met by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("target {0} is not realizable")]
    NotRealizable(u64),

    /// A bound, modulus or instance exceeds what the library can address.
    #[error("{0}")]
    TooLarge(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotRealizable(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
