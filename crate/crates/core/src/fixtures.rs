//! Shared test models and definitional helpers.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use proptest::prelude::*;

use crate::automaton::{Automaton, EventId, StateId};
use crate::observation::{ObservationMap, Symbol};
use crate::set::StateSet;

pub type Model = (Automaton, ObservationMap, ObservationMap);

/// The eight-state running example: low observer sees `b, d`, high observer sees `a, b`.
pub fn g1() -> Model {
    let g = Automaton::builder()
        .states(["0", "1", "2", "3", "4", "5", "6", "7"])
        .unwrap()
        .events(["a", "b", "c", "d"])
        .unwrap()
        .initial("0")
        .unwrap();
    let g = [
        ("0", "c", "2"),
        ("2", "b", "4"),
        ("4", "d", "6"),
        ("0", "a", "1"),
        ("1", "b", "3"),
        ("3", "b", "5"),
        ("5", "a", "7"),
        ("7", "d", "7"),
        ("6", "d", "4"),
    ]
    .into_iter()
    .fold(g, |b, (x, e, y)| b.transition(x, e, y).unwrap())
    .build()
    .unwrap();
    let lo = ObservationMap::natural(&g, ["b", "d"]).unwrap();
    let hi = ObservationMap::natural(&g, ["a", "b"]).unwrap();
    (g, lo, hi)
}

/// The robot workspace: low observer sees `r, g`, high observer sees `b, g`.
pub fn g0() -> Model {
    let g = Automaton::builder()
        .states(["0", "1", "2", "3", "4", "5", "6", "7"])
        .unwrap()
        .events(["b", "r", "g"])
        .unwrap()
        .initial("0")
        .unwrap();
    let g = [
        ("0", "g", "7"),
        ("7", "g", "0"),
        ("3", "g", "5"),
        ("5", "g", "3"),
        ("4", "g", "6"),
        ("6", "g", "4"),
        ("0", "r", "2"),
        ("0", "b", "1"),
        ("1", "r", "3"),
        ("2", "b", "4"),
        ("6", "r", "5"),
    ]
    .into_iter()
    .fold(g, |b, (x, e, y)| b.transition(x, e, y).unwrap())
    .build()
    .unwrap();
    let lo = ObservationMap::natural(&g, ["r", "g"]).unwrap();
    let hi = ObservationMap::natural(&g, ["b", "g"]).unwrap();
    (g, lo, hi)
}

/// Events named by single characters.
pub fn events(g: &Automaton, s: &str) -> Vec<EventId> {
    s.chars()
        .map(|c| g.event_id(c.encode_utf8(&mut [0; 4])).unwrap())
        .collect()
}

pub fn obs(h: &ObservationMap, s: &str) -> Vec<Symbol> {
    s.chars()
        .map(|c| h.symbol_id(c.encode_utf8(&mut [0; 4])).unwrap())
        .collect()
}

pub fn set(g: &Automaton, names: &[&str]) -> StateSet {
    names.iter().map(|n| g.state_id(n).unwrap()).collect()
}

pub fn word(g: &Automaton, s: &[EventId]) -> String {
    s.iter().map(|e| g.event_name(*e)).collect()
}

/// Definitional estimate: breadth-first over `(state, consumed prefix of α)`.
pub fn brute_estimate(g: &Automaton, h: &ObservationMap, alpha: &[Symbol]) -> StateSet {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([(g.initial(), 0usize)]);
    seen.insert((g.initial(), 0usize));
    let mut out = BTreeSet::new();
    while let Some((x, i)) = queue.pop_front() {
        if i == alpha.len() {
            out.insert(x);
        }
        for (e, y) in g.successors(x) {
            let j = match h.output(e) {
                None => i,
                Some(o) if i < alpha.len() && alpha[i] == o => i + 1,
                Some(_) => continue,
            };
            if seen.insert((y, j)) {
                queue.push_back((y, j));
            }
        }
    }
    out.into_iter().collect()
}

/// All strings of `L(g)` of length at most `max_len`.
pub fn language(g: &Automaton, max_len: usize) -> Vec<Vec<EventId>> {
    let mut out = alloc::vec![Vec::new()];
    let mut frontier = alloc::vec![(Vec::new(), g.initial())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (s, x) in frontier {
            for (e, y) in g.successors(x) {
                let mut t = s.clone();
                t.push(e);
                out.push(t.clone());
                next.push((t, y));
            }
        }
        frontier = next;
    }
    out
}

fn assemble(
    n: usize,
    k: usize,
    delta: Vec<Option<usize>>,
    lo: Vec<Option<usize>>,
    hi: Vec<Option<usize>>,
) -> Model {
    let names: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
    let evs: Vec<String> = (0..k)
        .map(|i| format!("{}", (b'a' + i as u8) as char))
        .collect();
    let mut b = Automaton::builder();
    for s in &names {
        b.add_state(s).unwrap();
    }
    for e in &evs {
        b.add_event(e).unwrap();
    }
    b.set_initial("0").unwrap();
    for x in 0..n {
        let row = &delta[x * k..(x + 1) * k];
        if row.iter().all(Option::is_none) {
            b.add_transition(&names[x], &evs[0], &names[x]).unwrap();
        }
        for (e, t) in row.iter().enumerate() {
            if let Some(y) = t {
                b.add_transition(&names[x], &evs[e], &names[*y]).unwrap();
            }
        }
    }
    let g = b.build().unwrap();
    let syms: Vec<String> = (0..k)
        .map(|i| format!("{}", (b'p' + i as u8) as char))
        .collect();
    let map = |m: &[Option<usize>]| {
        ObservationMap::from_outputs(
            &g,
            evs.iter()
                .zip(m)
                .map(|(e, o)| (e.as_str(), o.map(|o| syms[o].as_str()))),
        )
        .unwrap()
    };
    let (lo, hi) = (map(&lo), map(&hi));
    (g, lo, hi)
}

/// Small live models with relabeling observation maps.
pub fn arb_model(max_states: usize, max_events: usize) -> impl Strategy<Value = Model> {
    (1..=max_states, 1..=max_events)
        .prop_flat_map(|(n, k)| {
            (
                Just(n),
                Just(k),
                proptest::collection::vec(proptest::option::weighted(0.5, 0..n), n * k),
                proptest::collection::vec(proptest::option::of(0..k), k),
                proptest::collection::vec(proptest::option::of(0..k), k),
            )
        })
        .prop_map(|(n, k, d, lo, hi)| assemble(n, k, d, lo, hi))
}

#[allow(dead_code)]
pub fn state(g: &Automaton, name: &str) -> StateId {
    g.state_id(name).unwrap()
}
