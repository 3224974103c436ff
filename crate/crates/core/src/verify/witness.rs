//! Turning estimator paths into system strings.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::automaton::{Automaton, EventId, StateId};
use crate::estimators::Recognizer;
use crate::observation::{ObservationMap, Symbol};

type Parents<N> = BTreeMap<(N, usize), Option<((N, usize), EventId)>>;

/// Breadth-first search over `(node, consumed prefix of beta)` for the
/// shortest event string whose high projection is `beta` and which ends in
/// a node satisfying `accept`. Ties follow event order.
fn lift<N: Ord + Copy>(
    init: N,
    succ: impl Fn(N) -> Vec<(EventId, N)>,
    high: &ObservationMap,
    beta: &[Symbol],
    accept: impl Fn(N) -> bool,
) -> Option<Vec<EventId>> {
    let mut parent: Parents<N> = BTreeMap::new();
    parent.insert((init, 0), None);
    let mut queue = VecDeque::from([(init, 0usize)]);
    while let Some(cur) = queue.pop_front() {
        let (n, pos) = cur;
        if pos == beta.len() && accept(n) {
            let mut s = Vec::new();
            let mut at = cur;
            while let Some(Some((prev, e))) = parent.get(&at) {
                s.push(*e);
                at = *prev;
            }
            s.reverse();
            return Some(s);
        }
        for (e, m) in succ(n) {
            let next = match high.output(e) {
                None => (m, pos),
                Some(o) if pos < beta.len() && beta[pos] == o => (m, pos + 1),
                Some(_) => continue,
            };
            if let alloc::collections::btree_map::Entry::Vacant(v) = parent.entry(next) {
                v.insert(Some((cur, e)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Shortest `s` with `H_a(s) = beta` leading to a recognizer state in `accept`.
pub fn lift_through_recognizer(
    rec: &Recognizer,
    high: &ObservationMap,
    beta: &[Symbol],
    accept: impl Fn(usize) -> bool,
) -> Option<Vec<EventId>> {
    lift(0usize, |i| rec.graph.edges(i).to_vec(), high, beta, accept)
}

/// Shortest plant string with `H_a(s) = beta`.
pub fn lift_through_plant(
    plant: &Automaton,
    high: &ObservationMap,
    beta: &[Symbol],
) -> Option<Vec<EventId>> {
    lift::<StateId>(
        plant.initial(),
        |x| plant.successors(x).collect(),
        high,
        beta,
        |_| true,
    )
}
