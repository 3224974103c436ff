//! Runs and current-state estimates.

use alloc::vec::Vec;

use crate::automaton::{Automaton, EventId, StateId};
use crate::observation::{ObservationMap, Symbol};
use crate::set::StateSet;
use crate::{Error, Result};

/// `δ(x₀, s)`, or `None` if some step is undefined.
pub fn run(aut: &Automaton, s: &[EventId]) -> Result<Option<StateId>> {
    run_from(aut, aut.initial(), s)
}

pub fn run_from(aut: &Automaton, from: StateId, s: &[EventId]) -> Result<Option<StateId>> {
    let mut x = from;
    for &e in s {
        if e.index() >= aut.num_events() {
            return Err(Error::UnknownEvent(alloc::format!("#{}", e.0)));
        }
        match aut.step(x, e) {
            Some(y) => x = y,
            None => return Ok(None),
        }
    }
    Ok(Some(x))
}

/// Least superset of `q` closed under transitions on `h`-silent events.
pub fn silent_closure(aut: &Automaton, h: &ObservationMap, q: &StateSet) -> StateSet {
    let mut seen = alloc::vec![false; aut.num_states()];
    let mut stack: Vec<StateId> = q.iter().copied().collect();
    for x in &stack {
        seen[x.index()] = true;
    }
    while let Some(x) = stack.pop() {
        for (e, y) in aut.successors(x) {
            if h.is_silent(e) && !seen[y.index()] {
                seen[y.index()] = true;
                stack.push(y);
            }
        }
    }
    aut.states().filter(|x| seen[x.index()]).collect()
}

/// States reachable from `q` by exactly one event with output `o`.
pub fn observable_step(aut: &Automaton, h: &ObservationMap, q: &StateSet, o: Symbol) -> StateSet {
    q.iter()
        .flat_map(|&x| {
            aut.successors(x)
                .filter(move |(e, _)| h.output(*e) == Some(o))
                .map(|(_, y)| y)
        })
        .collect()
}

/// Closure, step on `o`, closure: the estimator update for a closed estimate.
pub fn update_estimate(aut: &Automaton, h: &ObservationMap, q: &StateSet, o: Symbol) -> StateSet {
    silent_closure(
        aut,
        h,
        &observable_step(aut, h, &silent_closure(aut, h, q), o),
    )
}

pub fn initial_estimate(aut: &Automaton, h: &ObservationMap) -> StateSet {
    silent_closure(aut, h, &StateSet::singleton(aut.initial()))
}

/// `X̂(α)`: every state reachable by a string whose projection is `α`.
/// Empty exactly when `α` is not an observation of the model.
pub fn estimate_of(aut: &Automaton, h: &ObservationMap, alpha: &[Symbol]) -> Result<StateSet> {
    let mut q = initial_estimate(aut, h);
    for &o in alpha {
        if o.index() >= h.num_symbols() {
            return Err(Error::UnknownSymbol(alloc::format!("#{}", o.0)));
        }
        q = update_estimate(aut, h, &q, o);
    }
    Ok(q)
}
