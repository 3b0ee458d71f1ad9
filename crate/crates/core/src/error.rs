use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("modulus must be nonzero (use the derivative filtration for m = 0)")]
    ZeroModulus,

    #[error("multiset of size {size} exceeds the recursion cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("relation vectors differ: {left:?} vs {right:?}")]
    RelationMismatch { left: Vec<String>, right: Vec<String> },

    #[error("expected exactly {expected} generator(s), found {found}")]
    GeneratorCount { expected: usize, found: usize },

    #[error("closed-form dual evaluation needs all relations zero, relation {index} is {value}")]
    NonzeroRelation { index: usize, value: String },

    #[error("relation must be nonzero")]
    ZeroRelation,

    #[error("module kinds differ: {0}")]
    ModuleMismatch(String),

    #[error("scalar {0} does not act on the module")]
    ScalarNotInvertible(String),

    #[error("ring of size {size} exceeds the enumeration cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
