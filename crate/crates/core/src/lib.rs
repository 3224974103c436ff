//! Verification of epistemic properties of partially-observed discrete-event
//! systems watched by two independent observers.
//!
//! A *low-level* observer watches the plant through one observation map and
//! forms an estimate of the current state; a *high-level* observer watches the
//! same plant through a second map and tries to infer what the low-level
//! observer knows. Properties such as high-order opacity or epistemic
//! diagnosability are pattern tuples over these two views and are decided on
//! one of four finite constructions:
//!
//! * the knowledge [`Recognizer`] (plant synchronized with its low-level estimator),
//! * the [`DoubleEstimator`] (high-level subset construction over the recognizer),
//! * the [`TwinEstimator`] (recognizer paired with itself on equal high observations),
//! * the [`StatePairEstimator`] (high-level estimate of indistinguishable state pairs).
//!
//! The [`oracle`] module evaluates the same properties straight from their
//! definitions and is used to cross-check every engine.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod automaton;
pub mod dot;
pub mod error;
pub mod estimate;
pub mod estimators;
pub mod graph;
pub mod knowledge;
pub mod observation;
pub mod oracle;
mod scc;
pub mod set;
pub mod verify;

#[cfg(test)]
mod fixtures;

pub use automaton::{Automaton, AutomatonBuilder, EventId, StateId, ValidationReport};
pub use error::Error;
pub use estimate::{estimate_of, run, silent_closure};
pub use estimators::{
    build_double, build_recognizer, build_state_pair, build_twin, classify, Classification,
    DoubleEstimator, RecState, Recognizer, StatePairEstimator, Triple, TwinEstimator, TwinEvent,
};
pub use knowledge::{
    preset_task, refine_visited, KnowledgePredicate, Preset, Refined, TSpec, VerificationTask,
};
pub use observation::{project, ObservationMap, Symbol};
pub use set::{SortedSet, StateSet};
pub use verify::{
    verify, Clock, Engine, EngineChoice, KHigh, Lasso, Pattern, Quantifier, Stats, Verdict,
    Verifier, Witness,
};

pub type Result<T, E = Error> = core::result::Result<T, E>;
