//! The four finite constructions used to decide epistemic properties.

mod double;
mod recognizer;
mod state_pair;
mod twin;

pub use double::{build_double, DoubleEstimator};
pub use recognizer::{build_recognizer, classify, Classification, RecState, Recognizer};
pub use state_pair::{build_state_pair, StatePairEstimator, Triple};
pub use twin::{build_twin, TwinEstimator, TwinEvent};
