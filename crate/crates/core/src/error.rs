use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse {what} `{input}`: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("arithmetic overflow while {0}")]
    Overflow(String),

    #[error("{0} is not a limit ordinal")]
    NotLimit(String),

    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("illegal move #{index}: {reason}")]
    IllegalMove { index: usize, reason: String },

    #[error("transcript is incomplete")]
    Incomplete,

    #[error("member {member} indexes position {position} but the sequence prefix has length {len}")]
    PrefixTooShort {
        member: String,
        position: u64,
        len: usize,
    },

    #[error("strategy has no decision for reachable prefix `{0}`")]
    StrategyUndefined(String),

    #[error("family is not hereditary: {0}")]
    NotHereditary(String),

    #[error("family is not spreading: {0}")]
    NotSpreading(String),

    #[error("{0} is not a member of the family")]
    NotMember(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("universe bound {bound} too small: {needed} needed")]
    UniverseTooSmall { bound: u64, needed: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
