use thiserror::Error;

/// Coarse classification used by callers (the CLI maps these to exit codes).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCategory {
    /// The input itself is unusable (bad characters, degenerate word, bad arguments).
    Input,
    /// A configured resource cap was hit; rerun with a larger cap if you mean it.
    Resource,
    /// An invariant the implementation guarantees was violated.
    Internal,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,

    #[error("illegal character {ch:?} at position {pos}: words match [a-zA-Z]+")]
    IllegalCharacter { ch: char, pos: usize },

    #[error("word reduces to the identity")]
    ReducesToIdentity,

    #[error("word reduces to a single letter, which cannot lie in the commutator subgroup")]
    ReducesToSingleLetter,

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("not in the commutator subgroup: {0}")]
    NotInCommutatorSubgroup(String),

    #[error("circuit count exceeded the cap of {cap} (stopped after {reached})")]
    CircuitCapExceeded { cap: usize, reached: usize },

    #[error("vertex enumeration refused: C({vars}, {rows}) exceeds the guard of {guard} bases")]
    BasisGuardExceeded {
        vars: usize,
        rows: usize,
        guard: u64,
    },

    #[error("matching enumeration refused: {needed} matchings exceed the guard of {guard}")]
    MatchingGuardExceeded { needed: String, guard: u64 },

    #[error("surface too large to materialize: {0}")]
    SurfaceTooLarge(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            EmptyWord
            | IllegalCharacter { .. }
            | ReducesToIdentity
            | ReducesToSingleLetter
            | InvalidWeights(_)
            | InvalidArgument(_)
            | NotInCommutatorSubgroup(_) => ErrorCategory::Input,
            CircuitCapExceeded { .. }
            | BasisGuardExceeded { .. }
            | MatchingGuardExceeded { .. }
            | SurfaceTooLarge(_) => ErrorCategory::Resource,
            Internal(_) => ErrorCategory::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
