use thiserror::Error;

/// Every failure mode of the library. The CLI maps all of these to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate member set on line {line}")]
    DuplicateSet { line: usize },
    #[error("empty member set")]
    EmptySet,
    #[error("family has no member sets")]
    EmptyFamily,
    #[error("universe exceeds {cap} elements")]
    UniverseTooLarge { cap: usize },
    #[error("empty subcollection selector")]
    EmptySelector,
    #[error("selectors share member {0}")]
    OverlappingSelectors(usize),
    #[error("selector refers to member {index} but the family has {len} members")]
    SelectorOutOfRange { index: usize, len: usize },
    #[error("not a relevant collection: member {first} has {first_len} elements, member {second} has {second_len}")]
    NotRelevant {
        first: usize,
        first_len: usize,
        second: usize,
        second_len: usize,
    },
    #[error("{what} is too large: {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("family is not an hke collection")]
    NotHke,
    #[error("family is not a maximal hke collection")]
    NotMaximal,
    #[error("member index {index} out of range for a family of {len} members")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("family has {len} members, at least {min} required")]
    TooSmall { len: usize, min: usize },
    #[error("alpha {alpha} outside the supported range {min}..={max}")]
    AlphaOutOfRange {
        alpha: usize,
        min: usize,
        max: usize,
    },
    #[error("set is not a subset of the base member")]
    NotASubset,
    #[error("alpha mismatch: {0} vs {1}")]
    AlphaMismatch(usize, usize),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("self-loop on vertex `{label}` at line {line}")]
    SelfLoop { label: String, line: usize },
    #[error("duplicate edge {u}-{v} at line {line}")]
    DuplicateEdge { u: String, v: String, line: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("core too small: {requested} requested, intersection has {available}")]
    CoreTooSmall { requested: usize, available: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
