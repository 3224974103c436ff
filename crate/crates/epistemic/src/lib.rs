//! File formats, verdict serialization, random models, benchmarks and
//! cross-checks on top of [`epistemic_core`].

use std::time::Instant;

use epistemic_core::Clock;

pub mod bench;
pub mod crosscheck;
pub mod gen;
pub mod invariants;
pub mod model_file;
pub mod spec_file;
pub mod verdict_json;

/// A parse or resolution error. `line` is 1-based; 0 means the error is not
/// tied to a single line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{message}", if *line > 0 { format!("line {line}: ") } else { String::new() })]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Models shipped with the crate.
pub mod fixtures {
    pub const G0: &str = include_str!("../fixtures/G0.des");
    pub const G1: &str = include_str!("../fixtures/G1.des");

    pub fn model(name: &str) -> Option<&'static str> {
        match name {
            "G0" => Some(G0),
            "G1" => Some(G1),
            _ => None,
        }
    }
}

/// Wall clock for [`epistemic_core::Verifier::with_clock`].
pub struct StdClock(Instant);

impl StdClock {
    pub fn new() -> Self {
        StdClock(Instant::now())
    }
}

impl Default for StdClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for StdClock {
    fn now_micros(&self) -> u64 {
        self.0.elapsed().as_micros() as u64
    }
}
