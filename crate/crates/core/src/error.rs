use thiserror::Error;

/// Errors reported by the trie, the oracle structures and the workload tools.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty strings cannot be stored or searched")]
    EmptyString,

    #[error("no priority assigned to string {0:?}")]
    MissingPriority(String),

    #[error("priority {priority} outside of [1, {ceiling}]")]
    PriorityOutOfRange { priority: u32, ceiling: u32 },

    #[error("string {0:?} is not a member")]
    NotAMember(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn lossy(s: &[u8]) -> String {
    String::from_utf8_lossy(s).into_owned()
}

pub(crate) fn nonempty(s: &[u8]) -> Result<&[u8]> {
    if s.is_empty() {
        Err(Error::EmptyString)
    } else {
        Ok(s)
    }
}
