//! Bounded-enumeration checks of the estimator characterizations on seeded models.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use epistemic_core::oracle::{configs_for_high, oracle_estimate};
use epistemic_core::{
    build_double, build_recognizer, build_state_pair, build_twin, project, Automaton, EventId,
    ObservationMap, Recognizer, StateId, StateSet, Symbol, Triple, TwinEstimator, TwinEvent,
};
use rayon::prelude::*;

use crate::gen::{gen_random, suite_params};

/// Enumeration depths.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub recognizer: usize,
    pub double: usize,
    pub twin: usize,
    pub state_pair: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            recognizer: 6,
            double: 4,
            twin: 4,
            state_pair: 4,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub models: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

/// Event strings of `g` of length at most `n`, in length-lex order.
pub fn language(g: &Automaton, n: usize) -> Vec<Vec<EventId>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(g.initial(), Vec::new())];
    for _ in 0..n {
        let mut next = Vec::new();
        for (x, s) in &frontier {
            for (e, y) in g.successors(*x) {
                let mut t: Vec<EventId> = s.clone();
                t.push(e);
                out.push(t.clone());
                next.push((y, t));
            }
        }
        frontier = next;
    }
    out
}

/// All symbol words of length at most `n`.
pub fn words(h: &ObservationMap, n: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut frontier = out.clone();
    for _ in 0..n {
        let next: Vec<Vec<Symbol>> = frontier
            .iter()
            .flat_map(|w: &Vec<Symbol>| {
                h.symbols().map(move |o| {
                    let mut v = w.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn end_state(g: &Automaton, s: &[EventId]) -> Option<StateId> {
    s.iter().try_fold(g.initial(), |x, e| g.step(x, *e))
}

/// Whether the twin estimator has a path from its initial state whose two
/// projections are exactly `s1` and `s2`.
fn twin_accepts(twin: &TwinEstimator, s1: &[EventId], s2: &[EventId]) -> bool {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([(0usize, 0usize, 0usize)]);
    while let Some((i, p1, p2)) = queue.pop_front() {
        if (p1, p2) == (s1.len(), s2.len()) {
            return true;
        }
        if !seen.insert((i, p1, p2)) {
            continue;
        }
        for (ev, j) in twin.graph.edges(i) {
            let next = match *ev {
                TwinEvent::Both(x, y) => {
                    (s1.get(p1) == Some(&x) && s2.get(p2) == Some(&y)).then_some((p1 + 1, p2 + 1))
                }
                TwinEvent::First(x) => (s1.get(p1) == Some(&x)).then_some((p1 + 1, p2)),
                TwinEvent::Second(y) => (s2.get(p2) == Some(&y)).then_some((p1, p2 + 1)),
            };
            if let Some((a, b)) = next {
                queue.push_back((*j, a, b));
            }
        }
    }
    false
}

fn rec_config(rec: &Recognizer, i: usize) -> (StateId, StateSet) {
    (rec.state(i).state, rec.state(i).estimate.clone())
}

/// Runs every check on one model and returns `(checks, violations)`.
pub fn check_model(
    g: &Automaton,
    lo: &ObservationMap,
    hi: &ObservationMap,
    b: Bounds,
) -> (usize, Vec<String>) {
    let mut checks = 0;
    let mut bad = Vec::new();
    let mut check = |ok: bool, msg: &dyn Fn() -> String| {
        checks += 1;
        if !ok {
            bad.push(msg());
        }
    };
    let rec = build_recognizer(g, lo);

    // f(s) = (δ(s), estimate of H_o(s))
    for s in language(g, b.recognizer) {
        let alpha = project(lo, &s).expect("events of g");
        let expected = (
            end_state(g, &s).expect("in language"),
            oracle_estimate(g, lo, &alpha).expect("feasible"),
        );
        let got = rec.run(&s).map(|i| rec_config(&rec, i));
        check(got.as_ref() == Some(&expected), &|| {
            format!("recognizer: f({s:?}) = {got:?}, expected {expected:?}")
        });
    }

    // f_D(β) = { f(s) : H_a(s) = β }
    let dbl = build_double(&rec, hi);
    let strings = language(g, b.double);
    for beta in words(hi, b.double) {
        let configs = configs_for_high(g, lo, hi, &beta).expect("symbols of hi");
        let got: BTreeSet<_> = dbl
            .run(&beta)
            .map(|i| dbl.state(i).iter().map(|&r| rec_config(&rec, r)).collect())
            .unwrap_or_default();
        check(got == configs, &|| {
            format!("double: f_D({beta:?}) = {got:?}, expected {configs:?}")
        });
        // every bounded string with that projection lands inside
        for s in &strings {
            if project(hi, s).expect("events of g") == beta {
                let f = rec
                    .run(s)
                    .map(|i| rec_config(&rec, i))
                    .expect("in language");
                check(got.contains(&f), &|| {
                    format!("double: f({s:?}) missing from f_D({beta:?})")
                });
            }
        }
    }

    // twin: edge-wise soundness, and every equal-projection pair has a path
    let twin = build_twin(&rec, hi);
    for (i, ev, j) in twin.graph.all_edges() {
        let (a, bb, a2, b2) = (
            twin.theta1(i),
            twin.theta2(i),
            twin.theta1(j),
            twin.theta2(j),
        );
        let ok = match *ev {
            TwinEvent::Both(x, y) => {
                hi.output(x).is_some()
                    && hi.output(x) == hi.output(y)
                    && rec.graph.step(a, &x) == Some(a2)
                    && rec.graph.step(bb, &y) == Some(b2)
            }
            TwinEvent::First(x) => hi.is_silent(x) && rec.graph.step(a, &x) == Some(a2) && bb == b2,
            TwinEvent::Second(y) => {
                hi.is_silent(y) && rec.graph.step(bb, &y) == Some(b2) && a == a2
            }
        };
        check(ok, &|| {
            format!("twin: edge {i} -{ev:?}-> {j} is not a synchronized move")
        });
    }
    let mut by_proj: BTreeMap<Vec<Symbol>, Vec<Vec<EventId>>> = BTreeMap::new();
    for s in language(g, b.twin) {
        by_proj
            .entry(project(hi, &s).expect("events of g"))
            .or_default()
            .push(s);
    }
    for group in by_proj.values() {
        for s1 in group {
            for s2 in group {
                check(twin_accepts(&twin, s1, s2), &|| {
                    format!("twin: no path for ({s1:?}, {s2:?})")
                });
            }
        }
    }

    // f_P(β) = { (x, a, b) : (x, E) ∈ f_D(β), a, b ∈ E }
    let spe = build_state_pair(g, lo, hi);
    for beta in words(hi, b.state_pair) {
        let configs = configs_for_high(g, lo, hi, &beta).expect("symbols of hi");
        let expected: BTreeSet<Triple> = configs
            .iter()
            .flat_map(|(x, e)| {
                e.iter()
                    .flat_map(move |&a| e.iter().map(move |&c| Triple::new(*x, a, c)))
            })
            .collect();
        let got: BTreeSet<Triple> = spe
            .run(&beta)
            .map(|i| spe.state(i).iter().copied().collect())
            .unwrap_or_default();
        check(got == expected, &|| {
            format!(
                "state-pair: f_P({beta:?}) has {} triples, expected {}",
                got.len(),
                expected.len()
            )
        });
    }
    (checks, bad)
}

/// Runs the checks on `models` seeded random models.
pub fn run(seed: u64, models: usize, max_states: usize, max_events: usize, b: Bounds) -> Report {
    let per: Vec<(usize, Vec<String>)> = (0..models)
        .into_par_iter()
        .map(|i| {
            let m = gen_random(suite_params(seed, i, max_states, max_events));
            let (n, v) = check_model(&m.automaton, &m.low, &m.high, b);
            (
                n,
                v.into_iter().map(|s| format!("model {i}: {s}")).collect(),
            )
        })
        .collect();
    per.into_iter().fold(
        Report {
            models,
            ..Report::default()
        },
        |mut r, (n, v)| {
            r.checks += n;
            r.violations.extend(v);
            r
        },
    )
}
