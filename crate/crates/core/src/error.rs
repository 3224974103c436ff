use alloc::string::String;

use crate::verify::{Engine, Pattern};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("unknown observation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
    #[error("no initial state declared")]
    MissingInitial,
    #[error("nondeterministic transitions from state `{state}` on event `{event}`")]
    Nondeterministic { state: String, event: String },
    #[error("observation map does not cover event `{0}`")]
    IncompleteObservation(String),
    #[error("model is not live: reachable state `{0}` has no outgoing transition")]
    NotLive(String),
    #[error("observation is not generated by the model")]
    InfeasibleObservation,
    #[error(
        "inadmissible pattern {0}: a low-level value of T excludes high-level N, and F excludes Y"
    )]
    InadmissiblePattern(Pattern),
    #[error("engine {engine} cannot decide pattern {pattern}")]
    EngineMismatch { engine: Engine, pattern: Pattern },
    #[error("engine {0} requires a distinguishability predicate")]
    PredicateMismatch(Engine),
    #[error("engine {0} cannot decide a delayed property")]
    DelayedEngine(Engine),
    #[error("delayed property requires a secret state set")]
    MissingSecret,
    #[error("a verification task needs at least one pattern")]
    NoPatterns,
    #[error("knowledge table has no entry for estimate {0}")]
    MissingTableEntry(String),
    #[error("exploration budget of {0} nodes exceeded")]
    BudgetExceeded(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Errors that indicate a broken invariant inside the library rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::BudgetExceeded(_))
    }
}
