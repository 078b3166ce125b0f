use thiserror::Error;

use crate::words::Word;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter '{0}' is not in the alphabet")]
    ForeignLetter(char),

    #[error("{0}: the empty word is not allowed here")]
    EmptyWord(&'static str),

    #[error("word {0} is not primitive")]
    NotPrimitive(Word),

    #[error("malformed coordinate sequence: {0}")]
    MalformedCoordinates(String),

    #[error("invalid language: {0}")]
    InvalidLanguage(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unknown group element '{0}'")]
    UnknownElement(String),

    #[error("word {0} lies outside L ∪ L̈, so f cannot be assigned on it")]
    NotInDomain(Word),

    #[error("conflicting values assigned to {0}")]
    ConflictingValue(Word),

    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),

    #[error("letter '{0}' has no assigned value")]
    Unassigned(char),

    #[error(
        "term has rank {0}; only rank <= 1 is supported (over LG, rank 2 already differs from S: \
         LG satisfies (x^w y x^w)^w = x^w while S does not)"
    )]
    RankTooHigh(usize),

    #[error("elements belong to different semigroups")]
    MismatchedContext,

    #[error("too large to enumerate: {0}")]
    TooLarge(String),

    #[error("congruence violated: {0}")]
    CongruenceViolation(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
