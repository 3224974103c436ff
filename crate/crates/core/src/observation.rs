//! Observation maps `H : Σ → Δ ∪ {ε}` and their extension to strings.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{Automaton, EventId};
use crate::{Error, Result};

/// An output symbol of one particular observation map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A total map from events to output symbols or silence.
///
/// Distinct events may share a symbol (relabeling); natural projection is the
/// special case where every observable event outputs its own name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationMap {
    symbols: Vec<String>,
    symbol_index: BTreeMap<String, Symbol>,
    map: Vec<Option<Symbol>>,
}

impl ObservationMap {
    /// Builds a map over `aut`'s events from `(event, output)` pairs, where
    /// `None` is silence. Every event must be listed exactly once.
    pub fn from_outputs<'a, I>(aut: &Automaton, outputs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Option<&'a str>)>,
    {
        let mut map: Vec<Option<Option<Symbol>>> = vec![None; aut.num_events()];
        let mut symbols = Vec::new();
        let mut symbol_index = BTreeMap::new();
        for (event, out) in outputs {
            let e = aut
                .event_id(event)
                .ok_or_else(|| Error::UnknownEvent(event.to_string()))?;
            if map[e.index()].is_some() {
                return Err(Error::Duplicate(event.to_string()));
            }
            let sym = out.map(|o| {
                *symbol_index.entry(o.to_string()).or_insert_with(|| {
                    symbols.push(o.to_string());
                    Symbol(symbols.len() as u32 - 1)
                })
            });
            map[e.index()] = Some(sym);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(e, m)| {
                m.ok_or_else(|| {
                    Error::IncompleteObservation(aut.event_name(EventId(e as u32)).to_string())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ObservationMap {
            symbols,
            symbol_index,
            map,
        })
    }

    /// Natural projection: listed events are observed under their own name,
    /// all others are silent.
    pub fn natural<'a>(
        aut: &Automaton,
        observable: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self> {
        let observable: Vec<&str> = observable.into_iter().collect();
        for o in &observable {
            if aut.event_id(o).is_none() {
                return Err(Error::UnknownEvent(o.to_string()));
            }
        }
        Self::from_outputs(
            aut,
            aut.events().map(|e| {
                let name = aut.event_name(e);
                (name, observable.contains(&name).then_some(name))
            }),
        )
    }

    pub fn full(aut: &Automaton) -> Self {
        Self::natural(aut, aut.events().map(|e| aut.event_name(e))).expect("events of aut")
    }

    pub fn silent(aut: &Automaton) -> Self {
        Self::natural(aut, []).expect("no events")
    }

    pub fn output(&self, e: EventId) -> Option<Symbol> {
        self.map[e.index()]
    }

    pub fn is_silent(&self, e: EventId) -> bool {
        self.map[e.index()].is_none()
    }

    pub fn num_events(&self) -> usize {
        self.map.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.symbols.len() as u32).map(Symbol)
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.symbols[s.index()]
    }

    pub fn symbol_id(&self, name: &str) -> Option<Symbol> {
        self.symbol_index.get(name).copied()
    }

    /// Events whose output is `s`.
    pub fn preimage(&self, s: Symbol) -> impl Iterator<Item = EventId> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter(move |(_, o)| **o == Some(s))
            .map(|(e, _)| EventId(e as u32))
    }

    pub fn observable_events(&self) -> impl Iterator<Item = EventId> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_some())
            .map(|(e, _)| EventId(e as u32))
    }

    pub fn parse_observation(&self, names: &[&str]) -> Result<Vec<Symbol>> {
        names
            .iter()
            .map(|n| {
                self.symbol_id(n)
                    .ok_or_else(|| Error::UnknownSymbol(n.to_string()))
            })
            .collect()
    }
}

/// `H(s)`: concatenation of the non-silent outputs of `s`.
pub fn project(h: &ObservationMap, s: &[EventId]) -> Result<Vec<Symbol>> {
    s.iter()
        .map(|&e| {
            if e.index() >= h.num_events() {
                Err(Error::UnknownEvent(alloc::format!("#{}", e.0)))
            } else {
                Ok(h.output(e))
            }
        })
        .filter_map(|r| r.transpose())
        .collect()
}
