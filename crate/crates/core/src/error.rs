use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown family name `{0}`")]
    UnknownFamily(String),
    #[error("rank {rank} out of range for family {family}")]
    RankOutOfRange { family: String, rank: usize },
    #[error("malformed superscript `{0}`")]
    MalformedSuperscript(String),
    #[error("duplicate explicit bond {0}")]
    DuplicateBond(String),
    #[error("cannot parse diagram `{spec}`: {reason}")]
    DiagramSyntax { spec: String, reason: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("bond {0} is below 3")]
    BondTooSmall(u32),
    #[error("bond {m} does not divide field level {level}")]
    BondNotInField { m: u32, level: u32 },
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("elements belong to different diagrams")]
    DiagramMismatch,
    #[error("subset is not spherical")]
    NonSpherical,
    #[error("the group is infinite")]
    InfiniteGroup,
    #[error("word is not reduced: {0}")]
    NotReduced(String),
    #[error("element is not I-reduced: {0}")]
    NotIReduced(String),
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("guard exceeded after {0} elements")]
    GuardExceeded(usize),
    #[error("closure limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("label occurs fewer than twice in the word")]
    TooFewOccurrences,
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("malformed table row {row}: {reason}")]
    MalformedRow { row: String, reason: String },
    #[error("bond dominance violated at {0}")]
    DominanceViolated(String),
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("outside the classified families: {0}")]
    Unclassified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
