use alloc::vec::Vec;

use super::recognizer::Recognizer;
use crate::automaton::EventId;
use crate::graph::StateGraph;
use crate::observation::ObservationMap;

/// An event of the twin estimator. `Both` pairs two high-observable events
/// with the same output; `First`/`Second` move one copy on a high-silent event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwinEvent {
    Both(EventId, EventId),
    First(EventId),
    Second(EventId),
}

impl TwinEvent {
    pub fn first(self) -> Option<EventId> {
        match self {
            TwinEvent::Both(a, _) | TwinEvent::First(a) => Some(a),
            TwinEvent::Second(_) => None,
        }
    }

    pub fn second(self) -> Option<EventId> {
        match self {
            TwinEvent::Both(_, b) | TwinEvent::Second(b) => Some(b),
            TwinEvent::First(_) => None,
        }
    }

    /// Member of the high-observable partition.
    pub fn is_observable(self) -> bool {
        matches!(self, TwinEvent::Both(..))
    }

    /// Splits a twin path into its two plant strings.
    pub fn project<'a>(
        path: impl IntoIterator<Item = &'a TwinEvent>,
    ) -> (Vec<EventId>, Vec<EventId>) {
        let mut s1 = Vec::new();
        let mut s2 = Vec::new();
        for ev in path {
            s1.extend(ev.first());
            s2.extend(ev.second());
        }
        (s1, s2)
    }
}

/// `V`: the recognizer synchronized with a copy of itself on equal high
/// observations. States are pairs of recognizer indices.
#[derive(Clone, Debug)]
pub struct TwinEstimator {
    pub graph: StateGraph<(usize, usize), TwinEvent>,
    /// Pairs of high-observable events with equal output.
    pub observable_events: Vec<(EventId, EventId)>,
    /// High-silent events; each yields a `First` and a `Second` twin event.
    pub silent_events: Vec<EventId>,
}

impl TwinEstimator {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn theta1(&self, i: usize) -> usize {
        self.graph.state(i).0
    }

    pub fn theta2(&self, i: usize) -> usize {
        self.graph.state(i).1
    }

    /// The event alphabet in tie-break order.
    pub fn alphabet(&self) -> Vec<TwinEvent> {
        let mut v: Vec<TwinEvent> = self
            .observable_events
            .iter()
            .map(|&(a, b)| TwinEvent::Both(a, b))
            .collect();
        v.extend(self.silent_events.iter().map(|&e| TwinEvent::First(e)));
        v.extend(self.silent_events.iter().map(|&e| TwinEvent::Second(e)));
        v
    }
}

pub fn build_twin(rec: &Recognizer, high: &ObservationMap) -> TwinEstimator {
    let observable: Vec<EventId> = high.observable_events().collect();
    let observable_events: Vec<(EventId, EventId)> = observable
        .iter()
        .flat_map(|&a| {
            observable
                .iter()
                .filter(move |&&b| high.output(a) == high.output(b))
                .map(move |&b| (a, b))
        })
        .collect();
    let silent_events: Vec<EventId> = (0..high.num_events() as u32)
        .map(EventId)
        .filter(|e| high.is_silent(*e))
        .collect();

    let init = (StateGraph::<(), ()>::INITIAL, StateGraph::<(), ()>::INITIAL);
    let graph = StateGraph::explore(init, |&(q1, q2)| {
        let mut out = Vec::new();
        for &(a, b) in &observable_events {
            if let (Some(r1), Some(r2)) = (rec.graph.step(q1, &a), rec.graph.step(q2, &b)) {
                out.push((TwinEvent::Both(a, b), (r1, r2)));
            }
        }
        for &e in &silent_events {
            if let Some(r1) = rec.graph.step(q1, &e) {
                out.push((TwinEvent::First(e), (r1, q2)));
            }
        }
        for &e in &silent_events {
            if let Some(r2) = rec.graph.step(q2, &e) {
                out.push((TwinEvent::Second(e), (q1, r2)));
            }
        }
        out
    });
    TwinEstimator {
        graph,
        observable_events,
        silent_events,
    }
}
