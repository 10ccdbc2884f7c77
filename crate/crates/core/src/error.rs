use thiserror::Error;

use crate::atoms::AtomSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column}: clause heads must be single atoms")]
    CompoundHead { line: usize, column: usize },

    #[error("clause `{clause}` is not Horn")]
    NotHorn { clause: String },

    #[error("clause `{clause}` is not CC-Horn")]
    NotCcHorn { clause: String },

    #[error("clause `{clause}` has a positive body, program is not purely negative")]
    NotPurelyNegative { clause: String },

    #[error("{count} atoms exceed the exhaustive limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },

    #[error("model enumeration timed out after {} models", partial.len())]
    Timeout { partial: Vec<AtomSet> },

    #[error("more than {limit} supports for atom `{atom}`")]
    SupportExplosion { atom: String, limit: usize },

    #[error("the two sets are equal, ≺ is only defined on distinct sets")]
    EqualSets,

    #[error("operator is not antimonotone: {smaller:?} ⊆ {larger:?} but f(larger) ⊄ f(smaller)")]
    NotAntimonotone { smaller: AtomSet, larger: AtomSet },

    #[error("chain is not decreasing at position {index}")]
    NotDecreasing { index: usize },

    #[error("chain is not increasing at position {index}")]
    NotIncreasing { index: usize },

    #[error("unknown atom `{name}`")]
    UnknownAtom { name: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
