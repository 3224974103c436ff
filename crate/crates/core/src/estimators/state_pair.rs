use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{Automaton, StateId};
use crate::graph::StateGraph;
use crate::knowledge::TSpec;
use crate::observation::{ObservationMap, Symbol};
use crate::set::SortedSet;

/// `(x, (x₁, x₂))`: the plant may be in `x` while the low-level observer
/// cannot tell `x₁` from `x₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub actual: StateId,
    pub pair: (StateId, StateId),
}

impl Triple {
    pub fn new(actual: StateId, a: StateId, b: StateId) -> Self {
        Triple {
            actual,
            pair: (a, b),
        }
    }
}

/// `Obs_P`: deterministic over `Δ_a`, states are canonical triple sets.
#[derive(Clone, Debug)]
pub struct StatePairEstimator {
    pub graph: StateGraph<SortedSet<Triple>, Symbol>,
}

impl StatePairEstimator {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn state(&self, i: usize) -> &SortedSet<Triple> {
        self.graph.state(i)
    }

    pub fn run(&self, alpha: &[Symbol]) -> Option<usize> {
        alpha
            .iter()
            .try_fold(StateGraph::<SortedSet<Triple>, Symbol>::INITIAL, |i, o| {
                self.graph.step(i, o)
            })
    }

    /// `q ∩ (X × T) = ∅`: every pair the low-level observer may be confused
    /// about is harmless, so the high-level observer knows it knows.
    pub fn is_high_known(&self, i: usize, tspec: &TSpec) -> bool {
        self.state(i)
            .iter()
            .all(|t| !tspec.contains(t.pair.0, t.pair.1))
    }

    /// Indices of `Q_P^Y`.
    pub fn high_known(&self, tspec: &TSpec) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.is_high_known(i, tspec))
            .collect()
    }
}

struct Moves<'a> {
    plant: &'a Automaton,
    low: &'a ObservationMap,
    high: &'a ObservationMap,
    /// by_low_output[x][o]: successors of x on events with low output o
    by_low_output: Vec<Vec<Vec<StateId>>>,
}

impl<'a> Moves<'a> {
    fn new(plant: &'a Automaton, low: &'a ObservationMap, high: &'a ObservationMap) -> Self {
        let mut by_low_output = vec![vec![Vec::new(); low.num_symbols()]; plant.num_states()];
        for (x, e, y) in plant.transitions() {
            if let Some(o) = low.output(e) {
                by_low_output[x.index()][o.index()].push(y);
            }
        }
        Moves {
            plant,
            low,
            high,
            by_low_output,
        }
    }

    /// Successors of `t` where the first component fires `x → y` with low output `o`
    /// and the pair follows with events of the same low output.
    fn synced(&self, t: &Triple, y: StateId, o: Symbol, out: &mut Vec<Triple>) {
        let (a, b) = t.pair;
        for &a2 in &self.by_low_output[a.index()][o.index()] {
            for &b2 in &self.by_low_output[b.index()][o.index()] {
                out.push(Triple::new(y, a2, b2));
            }
        }
    }

    /// Moves that keep the high observation unchanged.
    fn silent_moves(&self, t: &Triple, out: &mut Vec<Triple>) {
        let (a, b) = t.pair;
        for (e, y) in self.plant.successors(t.actual) {
            if !self.high.is_silent(e) {
                continue;
            }
            match self.low.output(e) {
                None => out.push(Triple::new(y, a, b)),
                Some(o) => self.synced(t, y, o, out),
            }
        }
        for (e, a2) in self.plant.successors(a) {
            if self.low.is_silent(e) {
                out.push(Triple::new(t.actual, a2, b));
            }
        }
        for (e, b2) in self.plant.successors(b) {
            if self.low.is_silent(e) {
                out.push(Triple::new(t.actual, a, b2));
            }
        }
    }

    /// The single move on which the first component emits high output `h`.
    fn flip_moves(&self, t: &Triple, h: Symbol, out: &mut Vec<Triple>) {
        for (e, y) in self.plant.successors(t.actual) {
            if self.high.output(e) != Some(h) {
                continue;
            }
            match self.low.output(e) {
                None => out.push(Triple::new(y, t.pair.0, t.pair.1)),
                Some(o) => self.synced(t, y, o, out),
            }
        }
    }

    fn saturate(&self, seeds: Vec<Triple>) -> BTreeSet<Triple> {
        let mut seen: BTreeSet<Triple> = seeds.iter().copied().collect();
        let mut stack = seeds;
        let mut buf = Vec::new();
        while let Some(t) = stack.pop() {
            buf.clear();
            self.silent_moves(&t, &mut buf);
            for n in buf.drain(..) {
                if seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        seen
    }
}

/// Builds `Obs_P`. Each transition is a reachability search over triples
/// flagged before/after the one high-observable event: saturate, take the
/// flip move, saturate again.
pub fn build_state_pair(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
) -> StatePairEstimator {
    let moves = Moves::new(plant, low, high);
    let x0 = plant.initial();
    let init: SortedSet<Triple> = moves
        .saturate(vec![Triple::new(x0, x0, x0)])
        .into_iter()
        .collect();
    let graph = StateGraph::explore(init, |q| {
        let before = moves.saturate(q.iter().copied().collect());
        high.symbols()
            .filter_map(|h| {
                let mut flipped = Vec::new();
                for t in &before {
                    moves.flip_moves(t, h, &mut flipped);
                }
                if flipped.is_empty() {
                    return None;
                }
                let after: SortedSet<Triple> = moves.saturate(flipped).into_iter().collect();
                Some((h, after))
            })
            .collect()
    });
    StatePairEstimator { graph }
}
