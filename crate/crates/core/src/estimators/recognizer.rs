use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::automaton::{Automaton, EventId, StateId};
use crate::estimate::{initial_estimate, update_estimate};
use crate::graph::StateGraph;
use crate::knowledge::KnowledgePredicate;
use crate::observation::{ObservationMap, Symbol};
use crate::set::StateSet;
use crate::Result;

/// A recognizer state: the true plant state and the low-level estimate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecState {
    pub state: StateId,
    pub estimate: StateSet,
}

/// The knowledge recognizer `T_o`: the plant synchronized with its own
/// low-level current-state estimator, over the plant alphabet.
#[derive(Clone, Debug)]
pub struct Recognizer {
    pub graph: StateGraph<RecState, EventId>,
}

impl Recognizer {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn state(&self, i: usize) -> &RecState {
        self.graph.state(i)
    }

    /// `f(q, s)` from recognizer index `from`.
    pub fn run_from(&self, from: usize, s: &[EventId]) -> Option<usize> {
        s.iter().try_fold(from, |i, e| self.graph.step(i, e))
    }

    pub fn run(&self, s: &[EventId]) -> Option<usize> {
        self.run_from(StateGraph::<RecState, EventId>::INITIAL, s)
    }
}

pub fn build_recognizer(plant: &Automaton, low: &ObservationMap) -> Recognizer {
    let init = RecState {
        state: plant.initial(),
        estimate: initial_estimate(plant, low),
    };
    let mut updates: BTreeMap<(StateSet, Symbol), StateSet> = BTreeMap::new();
    let graph = StateGraph::explore(init, |q| {
        plant
            .successors(q.state)
            .map(|(e, y)| {
                let estimate = match low.output(e) {
                    None => q.estimate.clone(),
                    Some(o) => updates
                        .entry((q.estimate.clone(), o))
                        .or_insert_with(|| update_estimate(plant, low, &q.estimate, o))
                        .clone(),
                };
                (e, RecState { state: y, estimate })
            })
            .collect()
    });
    Recognizer { graph }
}

/// Known (`Q_T`) and unknown (`Q_F`) recognizer states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    known: Vec<bool>,
}

impl Classification {
    pub fn is_known(&self, i: usize) -> bool {
        self.known[i]
    }

    /// Indices of `Q_T`.
    pub fn known(&self) -> impl Iterator<Item = usize> + '_ {
        self.known
            .iter()
            .enumerate()
            .filter(|(_, k)| **k)
            .map(|(i, _)| i)
    }

    /// Indices of `Q_F`.
    pub fn unknown(&self) -> impl Iterator<Item = usize> + '_ {
        self.known
            .iter()
            .enumerate()
            .filter(|(_, k)| !**k)
            .map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }
}

pub fn classify(rec: &Recognizer, pred: &KnowledgePredicate) -> Result<Classification> {
    let known = rec
        .graph
        .states()
        .iter()
        .map(|q| pred.eval(&q.estimate))
        .collect::<Result<_>>()?;
    Ok(Classification { known })
}
