//! The four deciding procedures.

use alloc::string::String;
use alloc::vec::Vec;

use super::witness::{lift_through_plant, lift_through_recognizer};
use super::{Engine, KHigh, Lasso, Pattern, Quantifier, Verdict, Witness};
use crate::automaton::Automaton;
use crate::estimators::{
    Classification, DoubleEstimator, Recognizer, StatePairEstimator, TwinEstimator, TwinEvent,
};
use crate::knowledge::TSpec;
use crate::observation::{ObservationMap, Symbol};
use crate::scc::tarjan;
use crate::{Error, Result};

/// The model and observers a check refers to.
#[derive(Clone, Copy)]
pub struct Setting<'a> {
    pub model: &'a Automaton,
    pub low: &'a ObservationMap,
    pub high: &'a ObservationMap,
}

fn lift_failed() -> Error {
    Error::Internal(String::from(
        "estimator path could not be lifted to a system string",
    ))
}

/// Decide by scanning a sequence of states for one that satisfies (exists)
/// or violates (forall) `good`. Returns the verdict and the deciding state.
fn quantify(p: Pattern, n: usize, good: impl Fn(usize) -> bool) -> (bool, Option<usize>) {
    match p.quantifier() {
        Quantifier::ForAll => match (0..n).find(|&i| !good(i)) {
            Some(i) => (false, Some(i)),
            None => (true, None),
        },
        Quantifier::Exists => match (0..n).find(|&i| good(i)) {
            Some(i) => (true, Some(i)),
            None => (false, None),
        },
    }
}

/// Double-estimator check. States of the graph are in breadth-first order,
/// so the first deciding state has a shortest observation.
pub fn check_double(
    s: Setting<'_>,
    rec: &Recognizer,
    cls: &Classification,
    dbl: &DoubleEstimator,
    p: Pattern,
) -> Result<Verdict> {
    let kinds: Vec<(bool, bool)> = dbl
        .graph
        .states()
        .iter()
        .map(|q| {
            let t = q.iter().any(|&i| cls.is_known(i));
            let f = q.iter().any(|&i| !cls.is_known(i));
            (t, f)
        })
        .collect();
    let all_t = |i: usize| !kinds[i].1;
    let all_f = |i: usize| !kinds[i].0;
    let has_t = |i: usize| kinds[i].0;
    let has_f = |i: usize| kinds[i].1;
    let good = |i: usize| match p.number() {
        1 => !all_t(i),
        2 => !all_f(i),
        3 => all_t(i),
        4 => all_f(i),
        5 => all_t(i) || !has_t(i),
        6 => all_f(i) || !has_f(i),
        7 => !all_t(i) && has_t(i),
        8 => !all_f(i) && has_f(i),
        _ => unreachable!(),
    };
    let (holds, at) = quantify(p, dbl.len(), good);
    let witness = match at {
        None => None,
        Some(i) => {
            let (_, path) = dbl
                .graph
                .shortest_path(|j| j == i)
                .ok_or_else(lift_failed)?;
            let beta: Vec<Symbol> = path.into_iter().copied().collect();
            let k_high = KHigh::of(has_t(i), has_f(i));
            let q = dbl.state(i);
            let in_q = |j: usize| q.contains(&j);
            let want = p.k_low();
            let sys =
                lift_through_recognizer(rec, s.high, &beta, |j| in_q(j) && cls.is_known(j) == want)
                    .ok_or_else(lift_failed)?;
            let confused = if k_high == KHigh::U {
                Some(
                    lift_through_recognizer(rec, s.high, &beta, |j| {
                        in_q(j) && cls.is_known(j) != want
                    })
                    .ok_or_else(lift_failed)?,
                )
            } else {
                None
            };
            Some(Witness::new(s.low, s.high, sys, want, k_high, confused)?)
        }
    };
    Ok(Verdict::new(holds, Engine::Double, witness))
}

/// Twin-estimator check for the patterns with a determinate or mixed
/// pair condition.
pub fn check_twin(
    s: Setting<'_>,
    _rec: &Recognizer,
    cls: &Classification,
    twin: &TwinEstimator,
    p: Pattern,
) -> Result<Verdict> {
    if !p.twin_decidable() {
        return Err(Error::EngineMismatch {
            engine: Engine::Twin,
            pattern: p,
        });
    }
    let k = |i: usize| (cls.is_known(twin.theta1(i)), cls.is_known(twin.theta2(i)));
    let good = |i: usize| {
        let (a, b) = k(i);
        match p.quantifier() {
            Quantifier::ForAll => a == b,
            Quantifier::Exists => a && !b,
        }
    };
    let (holds, at) = quantify(p, twin.len(), good);
    let witness = match at {
        None => None,
        Some(i) => {
            let (_, path) = twin
                .graph
                .shortest_path(|j| j == i)
                .ok_or_else(lift_failed)?;
            let (s1, s2) = TwinEvent::project(path);
            let first_is_t = k(i).0;
            let (sys, confused) = if first_is_t == p.k_low() {
                (s1, s2)
            } else {
                (s2, s1)
            };
            Some(Witness::new(
                s.low,
                s.high,
                sys,
                p.k_low(),
                KHigh::U,
                Some(confused),
            )?)
        }
    };
    Ok(Verdict::new(holds, Engine::Twin, witness))
}

/// State-pair check: `Q_P^Y` empty or not.
pub fn check_spair(
    s: Setting<'_>,
    spe: &StatePairEstimator,
    tspec: &TSpec,
    p: Pattern,
) -> Result<Verdict> {
    if !p.state_pair_decidable() {
        return Err(Error::EngineMismatch {
            engine: Engine::Spair,
            pattern: p,
        });
    }
    // pattern 1 holds iff no Q_P^Y state, pattern 3 iff some
    let first = (0..spe.len()).find(|&i| spe.is_high_known(i, tspec));
    let holds = match p.quantifier() {
        Quantifier::ForAll => first.is_none(),
        Quantifier::Exists => first.is_some(),
    };
    let witness = match first {
        None => None,
        Some(i) => {
            let (_, path) = spe
                .graph
                .shortest_path(|j| j == i)
                .ok_or_else(lift_failed)?;
            let beta: Vec<Symbol> = path.into_iter().copied().collect();
            let sys = lift_through_plant(s.model, s.high, &beta).ok_or_else(lift_failed)?;
            Some(Witness::new(s.low, s.high, sys, true, KHigh::Y, None)?)
        }
    };
    Ok(Verdict::new(holds, Engine::Spair, witness))
}

/// Delayed check on the twin of the refined model. The property fails iff
/// a cycle among states with `θ₁ ∈ Q_T`, `θ₂ ∈ Q_F` contains a `Both` edge.
pub fn check_finite_diag(
    s: Setting<'_>,
    _rec: &Recognizer,
    cls: &Classification,
    twin: &TwinEstimator,
) -> Result<Verdict> {
    s.model.ensure_live()?;
    let keep = |i: usize| cls.is_known(twin.theta1(i)) && !cls.is_known(twin.theta2(i));
    let succ = |i: usize| twin.graph.edges(i).iter().map(|(_, j)| *j).collect();
    let comps = tarjan(twin.len(), &keep, &succ);
    let mut comp_of = alloc::vec![usize::MAX; twin.len()];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    // smallest source index first: breadth-first order keeps stems short
    let chosen = (0..twin.len()).filter(|&u| keep(u)).find_map(|u| {
        twin.graph
            .edges(u)
            .iter()
            .find(|(ev, v)| ev.is_observable() && keep(*v) && comp_of[*v] == comp_of[u])
            .map(|(ev, v)| (u, *ev, *v))
    });
    let Some((u, ev, v)) = chosen else {
        return Ok(Verdict::new(true, Engine::Cycle, None));
    };
    let (_, stem) = twin
        .graph
        .shortest_path(|j| j == u)
        .ok_or_else(lift_failed)?;
    let c = comp_of[u];
    let (_, back) = twin
        .graph
        .shortest_path_within(v, |j| comp_of[j] == c, |j| j == u)
        .ok_or_else(lift_failed)?;
    let stem: Vec<TwinEvent> = stem.into_iter().copied().collect();
    let mut cycle = alloc::vec![ev];
    cycle.extend(back.into_iter().copied());
    let (sys, confused) = TwinEvent::project(stem.iter().chain(&cycle));
    let mut w = Witness::new(s.low, s.high, sys, true, KHigh::U, Some(confused))?;
    w.lasso = Some(Lasso { stem, cycle });
    Ok(Verdict::new(false, Engine::Cycle, Some(w)))
}
