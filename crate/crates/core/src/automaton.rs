//! Deterministic finite automata with partial transition functions.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EventId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A deterministic automaton `(X, Σ, δ, x₀)`.
///
/// `δ` is partial: an undefined transition is `None`, never a sink state.
/// Events keep their declaration order, which is also the tie-break order
/// used for witnesses.
#[derive(Clone, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    events: Vec<String>,
    state_index: BTreeMap<String, StateId>,
    event_index: BTreeMap<String, EventId>,
    initial: StateId,
    // row-major: delta[state * |Σ| + event]
    delta: Vec<Option<StateId>>,
}

impl Automaton {
    pub fn builder() -> AutomatonBuilder {
        AutomatonBuilder::default()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len() as u32).map(EventId)
    }

    pub fn state_name(&self, x: StateId) -> &str {
        &self.states[x.index()]
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.events[e.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn event_id(&self, name: &str) -> Option<EventId> {
        self.event_index.get(name).copied()
    }

    pub fn step(&self, x: StateId, e: EventId) -> Option<StateId> {
        self.delta[x.index() * self.events.len() + e.index()]
    }

    /// Defined transitions out of `x`, in event declaration order.
    pub fn successors(&self, x: StateId) -> impl Iterator<Item = (EventId, StateId)> + '_ {
        let n = self.events.len();
        self.delta[x.index() * n..(x.index() + 1) * n]
            .iter()
            .enumerate()
            .filter_map(|(e, t)| t.map(|t| (EventId(e as u32), t)))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.states()
            .flat_map(move |x| self.successors(x).map(move |(e, y)| (x, e, y)))
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial.index()] = true;
        while let Some(x) = queue.pop_front() {
            for (_, y) in self.successors(x) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Reachable states without an outgoing transition.
    pub fn dead_states(&self) -> Vec<StateId> {
        let reach = self.reachable();
        self.states()
            .filter(|x| reach[x.index()] && self.successors(*x).next().is_none())
            .collect()
    }

    pub fn is_live(&self) -> bool {
        self.dead_states().is_empty()
    }

    pub fn ensure_live(&self) -> Result<()> {
        match self.dead_states().first() {
            Some(x) => Err(Error::NotLive(self.state_name(*x).to_string())),
            None => Ok(()),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let reach = self.reachable();
        ValidationReport {
            nondeterministic: Vec::new(),
            unreachable: self
                .states()
                .filter(|x| !reach[x.index()])
                .map(|x| self.state_name(x).to_string())
                .collect(),
            dead: self
                .dead_states()
                .into_iter()
                .map(|x| self.state_name(x).to_string())
                .collect(),
        }
    }
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Automaton")
            .field("states", &self.states)
            .field("events", &self.events)
            .field("initial", &self.state_name(self.initial))
            .field(
                "trans",
                &self
                    .transitions()
                    .map(|(x, e, y)| (self.state_name(x), self.event_name(e), self.state_name(y)))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Problems found by [`AutomatonBuilder::validate`] or [`Automaton::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// `(state, event)` pairs with more than one declared transition.
    pub nondeterministic: Vec<(String, String)>,
    pub unreachable: Vec<String>,
    /// Reachable states with no outgoing transition.
    pub dead: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.nondeterministic.is_empty() && self.unreachable.is_empty() && self.dead.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, e) in &self.nondeterministic {
            writeln!(f, "nondeterministic: state {x} event {e}")?;
        }
        for x in &self.unreachable {
            writeln!(f, "unreachable: {x}")?;
        }
        for x in &self.dead {
            writeln!(f, "dead: {x}")?;
        }
        Ok(())
    }
}

/// Collects raw declarations; duplicate transitions are kept so that
/// [`validate`](Self::validate) can report them.
#[derive(Clone, Debug, Default)]
pub struct AutomatonBuilder {
    states: Vec<String>,
    events: Vec<String>,
    state_index: BTreeMap<String, StateId>,
    event_index: BTreeMap<String, EventId>,
    initial: Option<StateId>,
    trans: Vec<(StateId, EventId, StateId)>,
}

impl AutomatonBuilder {
    pub fn add_state(&mut self, name: &str) -> Result<StateId> {
        if self.state_index.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let id = StateId(self.states.len() as u32);
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_event(&mut self, name: &str) -> Result<EventId> {
        if self.event_index.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let id = EventId(self.events.len() as u32);
        self.events.push(name.to_string());
        self.event_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn event_id(&self, name: &str) -> Result<EventId> {
        self.event_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    pub fn set_initial(&mut self, name: &str) -> Result<()> {
        self.initial = Some(self.state_id(name)?);
        Ok(())
    }

    pub fn add_transition(&mut self, src: &str, event: &str, dst: &str) -> Result<()> {
        let t = (
            self.state_id(src)?,
            self.event_id(event)?,
            self.state_id(dst)?,
        );
        self.trans.push(t);
        Ok(())
    }

    /// Builder-style helpers for tests and generated models.
    pub fn states<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        for n in names {
            self.add_state(n)?;
        }
        Ok(self)
    }

    pub fn events<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        for n in names {
            self.add_event(n)?;
        }
        Ok(self)
    }

    pub fn initial(mut self, name: &str) -> Result<Self> {
        self.set_initial(name)?;
        Ok(self)
    }

    pub fn transition(mut self, src: &str, event: &str, dst: &str) -> Result<Self> {
        self.add_transition(src, event, dst)?;
        Ok(self)
    }

    fn duplicates(&self) -> Vec<(StateId, EventId)> {
        let mut seen = BTreeMap::new();
        let mut dups = Vec::new();
        for &(x, e, _) in &self.trans {
            let n = seen.entry((x, e)).or_insert(0usize);
            *n += 1;
            if *n == 2 {
                dups.push((x, e));
            }
        }
        dups
    }

    pub fn validate(&self) -> ValidationReport {
        let nondeterministic = self
            .duplicates()
            .into_iter()
            .map(|(x, e)| {
                (
                    self.states[x.index()].clone(),
                    self.events[e.index()].clone(),
                )
            })
            .collect();
        let Some(initial) = self.initial else {
            return ValidationReport {
                nondeterministic,
                ..Default::default()
            };
        };
        let mut report = self.assemble(initial).validate();
        report.nondeterministic = nondeterministic;
        report
    }

    fn assemble(&self, initial: StateId) -> Automaton {
        let n = self.events.len();
        let mut delta = vec![None; self.states.len() * n];
        for &(x, e, y) in &self.trans {
            delta[x.index() * n + e.index()].get_or_insert(y);
        }
        Automaton {
            states: self.states.clone(),
            events: self.events.clone(),
            state_index: self.state_index.clone(),
            event_index: self.event_index.clone(),
            initial,
            delta,
        }
    }

    pub fn build(self) -> Result<Automaton> {
        if let Some(&(x, e)) = self.duplicates().first() {
            return Err(Error::Nondeterministic {
                state: self.states[x.index()].clone(),
                event: self.events[e.index()].clone(),
            });
        }
        let initial = self.initial.ok_or(Error::MissingInitial)?;
        Ok(self.assemble(initial))
    }
}
