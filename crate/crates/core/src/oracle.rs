//! Brute-force evaluation of knowledge, high-level estimates and patterns
//! straight from their definitions.
//!
//! Nothing here uses the estimator constructions or the estimate functions
//! of the rest of the crate; only the model and observation types are
//! shared. Every search is breadth-first with a visited set, so the first
//! counterexample found is a shortest one.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::automaton::{Automaton, EventId, StateId};
use crate::estimators::TwinEvent;
use crate::knowledge::KnowledgePredicate;
use crate::observation::{ObservationMap, Symbol};
use crate::set::StateSet;
use crate::verify::{Engine, KHigh, Lasso, Pattern, Quantifier, Verdict, Witness};
use crate::{Error, Result};

/// Upper bound on explored nodes in any single oracle search.
pub const BUDGET: usize = 1_000_000;

/// A plant state together with the low-level estimate reached with it.
pub type ObsConfig = (StateId, StateSet);

fn check_symbols(h: &ObservationMap, alpha: &[Symbol]) -> Result<()> {
    match alpha.iter().find(|o| o.index() >= h.num_symbols()) {
        Some(o) => Err(Error::UnknownSymbol(alloc::format!("#{}", o.0))),
        None => Ok(()),
    }
}

type Parents<N> = BTreeMap<(N, usize), Option<((N, usize), EventId)>>;

/// Generic breadth-first search over `(node, consumed prefix of word)`.
/// Returns the parent map and the accepted node, if any.
struct PrefixSearch<N> {
    parent: Parents<N>,
}

impl<N: Ord + Clone> PrefixSearch<N> {
    fn run(
        init: N,
        succ: impl Fn(&N) -> Vec<(EventId, N)>,
        h: &ObservationMap,
        word: &[Symbol],
        mut visit: impl FnMut(&N, usize) -> bool,
    ) -> Result<(Self, Option<(N, usize)>)> {
        let mut parent = BTreeMap::new();
        parent.insert((init.clone(), 0), None);
        let mut queue = VecDeque::from([(init, 0usize)]);
        while let Some(cur) = queue.pop_front() {
            if visit(&cur.0, cur.1) {
                return Ok((PrefixSearch { parent }, Some(cur)));
            }
            for (e, m) in succ(&cur.0) {
                let pos = match h.output(e) {
                    None => cur.1,
                    Some(o) if cur.1 < word.len() && word[cur.1] == o => cur.1 + 1,
                    Some(_) => continue,
                };
                let next = (m, pos);
                if !parent.contains_key(&next) {
                    if parent.len() >= BUDGET {
                        return Err(Error::BudgetExceeded(BUDGET));
                    }
                    parent.insert(next.clone(), Some((cur.clone(), e)));
                    queue.push_back(next);
                }
            }
        }
        Ok((PrefixSearch { parent }, None))
    }

    fn string_to(&self, node: &(N, usize)) -> Vec<EventId> {
        let mut s = Vec::new();
        let mut at = node;
        while let Some(Some((prev, e))) = self.parent.get(at) {
            s.push(*e);
            at = prev;
        }
        s.reverse();
        s
    }
}

fn plant_succ(plant: &Automaton) -> impl Fn(&StateId) -> Vec<(EventId, StateId)> + '_ {
    move |x| plant.successors(*x).collect()
}

/// `X̂_o(α)` by enumerating strings: every state at which some string with
/// low projection `α` can end.
pub fn oracle_estimate(
    plant: &Automaton,
    low: &ObservationMap,
    alpha: &[Symbol],
) -> Result<StateSet> {
    check_symbols(low, alpha)?;
    let mut found = BTreeSet::new();
    PrefixSearch::run(plant.initial(), plant_succ(plant), low, alpha, |x, pos| {
        if pos == alpha.len() {
            found.insert(*x);
        }
        false
    })?;
    Ok(found.into_iter().collect())
}

/// `Kw_o(α)`.
pub fn oracle_kw(
    plant: &Automaton,
    low: &ObservationMap,
    pred: &KnowledgePredicate,
    alpha: &[Symbol],
) -> Result<bool> {
    let e = oracle_estimate(plant, low, alpha)?;
    if e.is_empty() {
        return Err(Error::InfeasibleObservation);
    }
    pred.eval(&e)
}

/// Configuration-level model: a step of the plant and, on low-observable
/// events, of the estimate it carries.
struct Configs<'a, N> {
    low: &'a ObservationMap,
    succ: &'a dyn Fn(&N) -> Vec<(EventId, N)>,
}

impl<N: Ord + Clone> Configs<'_, N> {
    fn low_closure(&self, seed: BTreeSet<N>) -> BTreeSet<N> {
        let mut out = seed.clone();
        let mut stack: Vec<N> = seed.into_iter().collect();
        while let Some(x) = stack.pop() {
            for (e, y) in (self.succ)(&x) {
                if self.low.output(e).is_none() && out.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        out
    }

    fn initial(&self, x0: N) -> (N, BTreeSet<N>) {
        let e = self.low_closure(BTreeSet::from([x0.clone()]));
        (x0, e)
    }

    fn advance(&self, est: &BTreeSet<N>, o: Symbol) -> BTreeSet<N> {
        let stepped = est
            .iter()
            .flat_map(|x| (self.succ)(x))
            .filter(|(e, _)| self.low.output(*e) == Some(o))
            .map(|(_, y)| y)
            .collect();
        self.low_closure(stepped)
    }

    fn succ(&self, c: &(N, BTreeSet<N>)) -> Vec<(EventId, (N, BTreeSet<N>))> {
        (self.succ)(&c.0)
            .into_iter()
            .map(|(e, y)| {
                let est = match self.low.output(e) {
                    None => c.1.clone(),
                    Some(o) => self.advance(&c.1, o),
                };
                (e, (y, est))
            })
            .collect()
    }
}

fn to_state_set(s: &BTreeSet<StateId>) -> StateSet {
    s.iter().copied().collect()
}

/// Every configuration reachable by a string with high projection `beta`.
pub fn configs_for_high(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
    beta: &[Symbol],
) -> Result<BTreeSet<ObsConfig>> {
    check_symbols(high, beta)?;
    let succ = plant_succ(plant);
    let cfg = Configs { low, succ: &succ };
    let mut found = BTreeSet::new();
    PrefixSearch::run(
        cfg.initial(plant.initial()),
        |c| cfg.succ(c),
        high,
        beta,
        |c, pos| {
            if pos == beta.len() {
                found.insert((c.0, to_state_set(&c.1)));
            }
            false
        },
    )?;
    Ok(found)
}

/// `hatKw_ao(β)`.
pub fn oracle_hat_kw(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
    pred: &KnowledgePredicate,
    beta: &[Symbol],
) -> Result<KHigh> {
    let configs = configs_for_high(plant, low, high, beta)?;
    if configs.is_empty() {
        return Err(Error::InfeasibleObservation);
    }
    let mut vals = BTreeSet::new();
    for (_, e) in &configs {
        vals.insert(pred.eval(e)?);
    }
    Ok(KHigh::of(vals.contains(&true), vals.contains(&false)))
}

/// Result of a pattern evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternOutcome {
    pub holds: bool,
    /// Shortest high observation that decides the verdict (refutes a
    /// universal pattern or satisfies an existential one).
    pub deciding: Option<Vec<Symbol>>,
    /// Number of high-level configuration sets explored.
    pub explored: usize,
}

/// Decides `(Q s ∈ L: Kw_o(H_o(s)) = k_low)[hatKw_ao(H_a(s)) = k_high]`
/// by exploring, for every high observation, the set of configurations it
/// leads to.
pub fn oracle_pattern(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
    pred: &KnowledgePredicate,
    p: Pattern,
) -> Result<PatternOutcome> {
    type Node = BTreeSet<(StateId, BTreeSet<StateId>)>;
    let succ = plant_succ(plant);
    let cfg = Configs { low, succ: &succ };

    let high_closure = |seed: Node| -> Node {
        let mut out = seed.clone();
        let mut stack: Vec<_> = seed.into_iter().collect();
        while let Some(c) = stack.pop() {
            for (e, d) in cfg.succ(&c) {
                if high.output(e).is_none() && out.insert(d.clone()) {
                    stack.push(d);
                }
            }
        }
        out
    };

    let init = high_closure(BTreeSet::from([cfg.initial(plant.initial())]));
    let mut nodes: Vec<Node> = alloc::vec![init.clone()];
    let mut parent: Vec<Option<(usize, Symbol)>> = alloc::vec![None];
    let mut index: BTreeMap<Node, usize> = BTreeMap::from([(init, 0)]);
    let mut deciding = None;
    let mut i = 0;
    while i < nodes.len() {
        let mut has_t = false;
        let mut has_f = false;
        for (_, e) in &nodes[i] {
            if pred.eval(&to_state_set(e))? {
                has_t = true;
            } else {
                has_f = true;
            }
        }
        let in_domain = if p.k_low() { has_t } else { has_f };
        let matches = in_domain && KHigh::of(has_t, has_f) == p.k_high();
        let decides = match p.quantifier() {
            Quantifier::ForAll => in_domain && !matches,
            Quantifier::Exists => matches,
        };
        if decides {
            deciding = Some(i);
            break;
        }
        for o in high.symbols() {
            let stepped: Node = nodes[i]
                .iter()
                .flat_map(|c| cfg.succ(c))
                .filter(|(e, _)| high.output(*e) == Some(o))
                .map(|(_, d)| d)
                .collect();
            if stepped.is_empty() {
                continue;
            }
            let next = high_closure(stepped);
            if !index.contains_key(&next) {
                if nodes.len() >= BUDGET {
                    return Err(Error::BudgetExceeded(BUDGET));
                }
                index.insert(next.clone(), nodes.len());
                nodes.push(next);
                parent.push(Some((i, o)));
            }
        }
        i += 1;
    }
    let deciding = deciding.map(|mut j| {
        let mut beta = Vec::new();
        while let Some((k, o)) = parent[j] {
            beta.push(o);
            j = k;
        }
        beta.reverse();
        beta
    });
    Ok(PatternOutcome {
        holds: match p.quantifier() {
            Quantifier::ForAll => deciding.is_none(),
            Quantifier::Exists => deciding.is_some(),
        },
        deciding,
        explored: nodes.len(),
    })
}

/// Shortest string with high projection `beta` whose low-level knowledge
/// value is `k`.
fn lift_with_value(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
    pred: &KnowledgePredicate,
    beta: &[Symbol],
    k: bool,
) -> Result<Option<Vec<EventId>>> {
    let succ = plant_succ(plant);
    let cfg = Configs { low, succ: &succ };
    let mut err = None;
    let (search, hit) = PrefixSearch::run(
        cfg.initial(plant.initial()),
        |c| cfg.succ(c),
        high,
        beta,
        |c, pos| {
            pos == beta.len()
                && match pred.eval(&to_state_set(&c.1)) {
                    Ok(v) => v == k,
                    Err(e) => {
                        err = Some(e);
                        true
                    }
                }
        },
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(hit.map(|n| search.string_to(&n)))
}

/// Pattern verdict with a witness, for the `ORACLE` engine. Also returns
/// the number of explored nodes.
pub fn oracle_verdict(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
    pred: &KnowledgePredicate,
    p: Pattern,
) -> Result<(Verdict, usize)> {
    let out = oracle_pattern(plant, low, high, pred, p)?;
    let witness = match &out.deciding {
        None => None,
        Some(beta) => {
            let missing = || {
                Error::Internal(alloc::string::String::from(
                    "oracle witness could not be lifted",
                ))
            };
            let sys =
                lift_with_value(plant, low, high, pred, beta, p.k_low())?.ok_or_else(missing)?;
            let other = lift_with_value(plant, low, high, pred, beta, !p.k_low())?;
            let k_high = if other.is_some() {
                KHigh::U
            } else if p.k_low() {
                KHigh::Y
            } else {
                KHigh::N
            };
            Some(Witness::new(low, high, sys, p.k_low(), k_high, other)?)
        }
    };
    Ok((
        Verdict::new(out.holds, Engine::Oracle, witness),
        out.explored,
    ))
}

/// Outcome of the delayed-property search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDiagOutcome {
    pub holds: bool,
    pub lasso: Option<Lasso>,
    pub explored: usize,
}

/// Finite epistemic diagnosability by exploring pairs of runs with equal
/// high observations. Each run carries its plant state, whether a secret
/// state has been visited, and the low-level estimate over such pairs. The
/// property fails iff a reachable cycle keeps the first run revealed and
/// the second unrevealed while both runs make high-observable progress.
pub fn oracle_finite_diag(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
    secret: &StateSet,
) -> Result<FiniteDiagOutcome> {
    plant.ensure_live()?;
    type Node = (StateId, bool);
    type Run = (Node, BTreeSet<Node>);
    let succ = |n: &Node| -> Vec<(EventId, Node)> {
        plant
            .successors(n.0)
            .map(|(e, y)| (e, (y, n.1 || secret.contains(&y))))
            .collect()
    };
    let cfg = Configs { low, succ: &succ };
    let revealed = |r: &Run| r.1.iter().all(|n| n.1);

    let x0 = plant.initial();
    let r0 = cfg.initial((x0, secret.contains(&x0)));
    let init = (r0.clone(), r0);

    let mut nodes: Vec<(Run, Run)> = alloc::vec![init.clone()];
    let mut index: BTreeMap<(Run, Run), usize> = BTreeMap::from([(init, 0)]);
    let mut edges: Vec<Vec<(TwinEvent, usize)>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (a, b) = nodes[i].clone();
        let sa = cfg.succ(&a);
        let sb = cfg.succ(&b);
        let mut out = Vec::new();
        for (e1, a2) in &sa {
            let Some(o) = high.output(*e1) else { continue };
            for (e2, b2) in &sb {
                if high.output(*e2) == Some(o) {
                    out.push((TwinEvent::Both(*e1, *e2), (a2.clone(), b2.clone())));
                }
            }
        }
        for (e1, a2) in &sa {
            if high.is_silent(*e1) {
                out.push((TwinEvent::First(*e1), (a2.clone(), b.clone())));
            }
        }
        for (e2, b2) in &sb {
            if high.is_silent(*e2) {
                out.push((TwinEvent::Second(*e2), (a.clone(), b2.clone())));
            }
        }
        let mut es = Vec::with_capacity(out.len());
        for (ev, n) in out {
            let j = match index.get(&n) {
                Some(&j) => j,
                None => {
                    if nodes.len() >= BUDGET {
                        return Err(Error::BudgetExceeded(BUDGET));
                    }
                    index.insert(n.clone(), nodes.len());
                    nodes.push(n);
                    nodes.len() - 1
                }
            };
            es.push((ev, j));
        }
        edges.push(es);
        i += 1;
    }

    let bad: Vec<bool> = nodes
        .iter()
        .map(|(a, b)| revealed(a) && !revealed(b))
        .collect();
    let path =
        |from: usize, allowed: &dyn Fn(usize) -> bool, to: usize| -> Option<Vec<TwinEvent>> {
            let mut parent: Vec<Option<(usize, TwinEvent)>> = alloc::vec![None; nodes.len()];
            let mut seen = alloc::vec![false; nodes.len()];
            seen[from] = true;
            let mut queue = VecDeque::from([from]);
            while let Some(u) = queue.pop_front() {
                if u == to {
                    let mut p = Vec::new();
                    let mut cur = u;
                    while let Some((prev, ev)) = parent[cur] {
                        p.push(ev);
                        cur = prev;
                    }
                    p.reverse();
                    return Some(p);
                }
                for &(ev, v) in &edges[u] {
                    if !seen[v] && allowed(v) {
                        seen[v] = true;
                        parent[v] = Some((u, ev));
                        queue.push_back(v);
                    }
                }
            }
            None
        };

    for u in 0..nodes.len() {
        if !bad[u] {
            continue;
        }
        for &(ev, v) in &edges[u] {
            if !ev.is_observable() || !bad[v] {
                continue;
            }
            if let Some(back) = path(v, &|w| bad[w], u) {
                let stem = path(0, &|_| true, u).expect("explored nodes are reachable");
                let mut cycle = alloc::vec![ev];
                cycle.extend(back);
                return Ok(FiniteDiagOutcome {
                    holds: false,
                    lasso: Some(Lasso { stem, cycle }),
                    explored: nodes.len(),
                });
            }
        }
    }
    Ok(FiniteDiagOutcome {
        holds: true,
        lasso: None,
        explored: nodes.len(),
    })
}

/// Delayed-property verdict for the `ORACLE` engine.
pub fn oracle_finite_diag_verdict(
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
    secret: &StateSet,
) -> Result<(Verdict, usize)> {
    let out = oracle_finite_diag(plant, low, high, secret)?;
    let witness = match out.lasso {
        None => None,
        Some(lasso) => {
            let (sys, confused) = TwinEvent::project(lasso.stem.iter().chain(&lasso.cycle));
            let mut w = Witness::new(low, high, sys, true, KHigh::U, Some(confused))?;
            w.lasso = Some(lasso);
            Some(w)
        }
    };
    Ok((
        Verdict::new(out.holds, Engine::Oracle, witness),
        out.explored,
    ))
}

#[cfg(test)]
mod tests;
