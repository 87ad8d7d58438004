use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("word syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("collection did not terminate within {bound} steps")]
    NonTerminatingCollection { bound: u64 },

    #[error("inconsistent presentation at generator `{generator}`: {reason}")]
    Inconsistent { generator: String, reason: String },

    #[error("order mismatch: presentation defines a group of order {found}, expected {expected}")]
    OrderMismatch { found: u64, expected: u64 },

    #[error("relation `{0}` does not hold")]
    RelationViolated(String),

    #[error("group order {0} exceeds the supported maximum")]
    TooLarge(u64),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("no row {index} in family {family}")]
    UnknownRow { family: String, index: u32 },

    #[error("family {family} expects {expected} parameters, got {got}")]
    ParamCount { family: String, expected: usize, got: usize },

    #[error("m = {m} is outside the supported range {min}..={max}")]
    UnsupportedM { m: u32, min: u32, max: u32 },

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("elements come from different groups")]
    MixedParents,

    #[error("element {0} is not an involution")]
    NotInvolution(usize),

    #[error("coset enumeration exceeded {0} cosets")]
    CosetLimit(usize),

    #[error("cache: {0}")]
    Cache(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("data table: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
