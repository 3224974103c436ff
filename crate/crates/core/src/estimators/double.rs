use alloc::vec::Vec;

use super::recognizer::Recognizer;
use crate::graph::StateGraph;
use crate::observation::{ObservationMap, Symbol};
use crate::set::SortedSet;

/// `Obs_D`: the high-level observer's estimate of the recognizer state.
/// States are sets of recognizer indices; transitions are on `Δ_a`.
#[derive(Clone, Debug)]
pub struct DoubleEstimator {
    pub graph: StateGraph<SortedSet<usize>, Symbol>,
}

impl DoubleEstimator {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn state(&self, i: usize) -> &SortedSet<usize> {
        self.graph.state(i)
    }

    pub fn run(&self, alpha: &[Symbol]) -> Option<usize> {
        alpha
            .iter()
            .try_fold(StateGraph::<SortedSet<usize>, Symbol>::INITIAL, |i, o| {
                self.graph.step(i, o)
            })
    }
}

fn high_silent_closure(
    rec: &Recognizer,
    high: &ObservationMap,
    seed: Vec<usize>,
) -> SortedSet<usize> {
    let mut seen = alloc::vec![false; rec.len()];
    let mut stack = seed;
    for &i in &stack {
        seen[i] = true;
    }
    while let Some(i) = stack.pop() {
        for (e, j) in rec.graph.edges(i) {
            if high.is_silent(*e) && !seen[*j] {
                seen[*j] = true;
                stack.push(*j);
            }
        }
    }
    (0..rec.len()).filter(|i| seen[*i]).collect()
}

pub fn build_double(rec: &Recognizer, high: &ObservationMap) -> DoubleEstimator {
    let init = high_silent_closure(rec, high, alloc::vec![StateGraph::<(), ()>::INITIAL]);
    let graph = StateGraph::explore(init, |qd| {
        high.symbols()
            .filter_map(|o| {
                let step: Vec<usize> = qd
                    .iter()
                    .flat_map(|&i| {
                        rec.graph
                            .edges(i)
                            .iter()
                            .filter(|(e, _)| high.output(*e) == Some(o))
                            .map(|(_, j)| *j)
                    })
                    .collect();
                (!step.is_empty()).then(|| (o, high_silent_closure(rec, high, step)))
            })
            .collect()
    });
    DoubleEstimator { graph }
}
