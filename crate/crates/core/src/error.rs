use thiserror::Error;

/// Errors produced by parsing, stream ingestion, and query checking.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown proposition `{0}`")]
    UnknownProp(String),

    #[error("invalid proposition name `{name}`: {reason}")]
    InvalidPropName { name: String, reason: &'static str },

    #[error("duplicate proposition `{0}`")]
    DuplicateProp(String),

    #[error("alphabet has {len} propositions, limit is {cap}")]
    TooManyProps { len: usize, cap: usize },

    #[error("placeholder `var` is not allowed in a plain formula")]
    VarNotAllowed,

    #[error("temporal operator in a propositional context")]
    NotPropositional,

    #[error("input is not in positive normal form")]
    NotInPnf,

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("timestamps decrease at observation {index}")]
    DecreasingTimestamp { index: usize },

    #[error("working set exceeded the cap of {cap} intervals")]
    IntervalCapExceeded { cap: usize },

    #[error("{0} distinct shatterable labels exceed the subset-enumeration limit")]
    TooManyShatterableLabels(usize),

    #[error("deadline exceeded")]
    Timeout,
}

pub type Result<T> = std::result::Result<T, Error>;
