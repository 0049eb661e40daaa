use thiserror::Error;

use crate::codec::CodecError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The cache budget or network size cannot support the request.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Codec(#[from] CodecError),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
