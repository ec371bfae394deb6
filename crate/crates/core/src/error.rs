use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("generator index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("word is not reduced")]
    NotReduced,
    #[error("element is not fully commutative")]
    NotFc,
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("rewrite step cap of {0} exceeded")]
    NonTerminating(usize),
    #[error("diagram is not admissible: {0}")]
    NotAdmissible(String),
    #[error("diagram is not an ALT-diagram")]
    NotAlt,
    #[error("diagram is the identity")]
    IdentityDiagram,
    #[error("edge is not suitable")]
    NotSuitable,
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("wrong diagram class: {0}")]
    WrongClass(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
