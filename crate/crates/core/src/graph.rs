//! Explicit deterministic transition graphs over arbitrary state carriers.
//!
//! Every estimator in this crate is a [`StateGraph`] whose states are richer
//! values (pairs, sets of pairs, ...). Only the reachable part is stored and
//! state `0` is always the initial state.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct StateGraph<S, L> {
    states: Vec<S>,
    index: BTreeMap<S, usize>,
    edges: Vec<Vec<(L, usize)>>,
}

impl<S: Ord + Clone, L> StateGraph<S, L> {
    /// Breadth-first exploration from `initial`. `succ` must return at most
    /// one successor per label, in the order that should break ties.
    pub fn explore<F>(initial: S, mut succ: F) -> Self
    where
        F: FnMut(&S) -> Vec<(L, S)>,
    {
        let mut g = StateGraph {
            states: vec![initial.clone()],
            index: BTreeMap::from([(initial, 0)]),
            edges: vec![Vec::new()],
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let out = succ(&g.states[i]);
            let mut edges = Vec::with_capacity(out.len());
            for (label, target) in out {
                let j = match g.index.get(&target) {
                    Some(&j) => j,
                    None => {
                        let j = g.states.len();
                        g.states.push(target.clone());
                        g.index.insert(target, j);
                        g.edges.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((label, j));
            }
            g.edges[i] = edges;
        }
        g
    }

    pub fn find(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }
}

impl<S, L> StateGraph<S, L> {
    pub const INITIAL: usize = 0;

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &S {
        &self.states[i]
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn edges(&self, i: usize) -> &[(L, usize)] {
        &self.edges[i]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn all_edges(&self) -> impl Iterator<Item = (usize, &L, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(i, es)| es.iter().map(move |(l, j)| (i, l, *j)))
    }

    pub fn step(&self, i: usize, label: &L) -> Option<usize>
    where
        L: PartialEq,
    {
        self.edges[i]
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, j)| *j)
    }

    /// Shortest label path from the initial state to the first state
    /// satisfying `target`; ties follow the stored edge order.
    pub fn shortest_path(&self, target: impl Fn(usize) -> bool) -> Option<(usize, Vec<&L>)> {
        self.shortest_path_within(Self::INITIAL, |_| true, target)
    }

    /// As [`shortest_path`](Self::shortest_path) but starting at `from` and
    /// only passing through states accepted by `allowed`.
    pub fn shortest_path_within(
        &self,
        from: usize,
        allowed: impl Fn(usize) -> bool,
        target: impl Fn(usize) -> bool,
    ) -> Option<(usize, Vec<&L>)> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if target(i) {
                let mut path = Vec::new();
                let mut cur = i;
                while let Some((p, k)) = parent[cur] {
                    path.push(&self.edges[p][k].0);
                    cur = p;
                }
                path.reverse();
                return Some((i, path));
            }
            for (k, (_, j)) in self.edges[i].iter().enumerate() {
                if !seen[*j] && allowed(*j) {
                    seen[*j] = true;
                    parent[*j] = Some((i, k));
                    queue.push_back(*j);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explore_and_shortest_path() {
        // counter modulo 5 with +1 and +2 edges
        let g = StateGraph::explore(0u8, |&x| vec![(1u8, (x + 1) % 5), (2u8, (x + 2) % 5)]);
        assert_eq!(g.len(), 5);
        assert_eq!(g.num_edges(), 10);
        let (end, path) = g.shortest_path(|i| *g.state(i) == 4).unwrap();
        assert_eq!(*g.state(end), 4);
        assert_eq!(path, vec![&2, &2]);
        assert_eq!(g.step(0, &1).map(|j| *g.state(j)), Some(1));
    }
}
