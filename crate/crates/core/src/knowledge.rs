//! Knowledge predicates over state estimates, the visited-state refinement,
//! and named property presets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{Automaton, StateId};
use crate::observation::ObservationMap;
use crate::set::StateSet;
use crate::verify::{KHigh, Pattern, Quantifier};
use crate::{Error, Result};

/// Ordered state pairs the low-level observer needs to tell apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSpec {
    num_states: usize,
    pairs: BTreeSet<(StateId, StateId)>,
}

impl TSpec {
    pub fn new(
        aut: &Automaton,
        pairs: impl IntoIterator<Item = (StateId, StateId)>,
    ) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(a, b) in &pairs {
            for x in [a, b] {
                if x.index() >= aut.num_states() {
                    return Err(Error::UnknownState(format!("#{}", x.0)));
                }
            }
        }
        Ok(TSpec {
            num_states: aut.num_states(),
            pairs,
        })
    }

    pub fn empty(aut: &Automaton) -> Self {
        TSpec {
            num_states: aut.num_states(),
            pairs: BTreeSet::new(),
        }
    }

    /// All pairs of distinct states: distinguishability means a singleton estimate.
    pub fn distinct(aut: &Automaton) -> Self {
        let pairs = aut
            .states()
            .flat_map(|a| aut.states().filter(move |b| *b != a).map(move |b| (a, b)))
            .collect();
        TSpec {
            num_states: aut.num_states(),
            pairs,
        }
    }

    pub fn square(aut: &Automaton, set: &StateSet) -> Result<Self> {
        Self::new(
            aut,
            set.iter().flat_map(|&a| set.iter().map(move |&b| (a, b))),
        )
    }

    /// `(X ∖ S) × (X ∖ S)`: distinguishability means the estimate lies inside `S`.
    pub fn nonsecret_square(aut: &Automaton, secret: &StateSet) -> Result<Self> {
        let rest: StateSet = aut.states().filter(|x| !secret.contains(x)).collect();
        for x in secret {
            if x.index() >= aut.num_states() {
                return Err(Error::UnknownState(format!("#{}", x.0)));
            }
        }
        Self::square(aut, &rest)
    }

    pub fn contains(&self, a: StateId, b: StateId) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// `T ∪ T⁻¹`.
    pub fn symmetric_closure(&self) -> Self {
        TSpec {
            num_states: self.num_states,
            pairs: self
                .pairs
                .iter()
                .flat_map(|&(a, b)| [(a, b), (b, a)])
                .collect(),
        }
    }
}

/// `Dis(q)`: true iff `(q × q) ∩ T = ∅`.
pub fn eval_dis(tspec: &TSpec, q: &StateSet) -> bool {
    q.iter().all(|&a| q.iter().all(|&b| !tspec.contains(a, b)))
}

/// An information-state-based knowledge predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnowledgePredicate {
    Dis(TSpec),
    /// Explicit values per estimate. Every estimate met during verification
    /// must be listed.
    Table(BTreeMap<StateSet, bool>),
}

impl KnowledgePredicate {
    pub fn eval(&self, q: &StateSet) -> Result<bool> {
        match self {
            KnowledgePredicate::Dis(t) => Ok(eval_dis(t, q)),
            KnowledgePredicate::Table(table) => table
                .get(q)
                .copied()
                .ok_or_else(|| Error::MissingTableEntry(format!("{q:?}"))),
        }
    }

    pub fn tspec(&self) -> Option<&TSpec> {
        match self {
            KnowledgePredicate::Dis(t) => Some(t),
            KnowledgePredicate::Table(_) => None,
        }
    }
}

/// `G̃`: the plant extended with a flag recording whether a secret state has
/// been visited.
#[derive(Clone, Debug)]
pub struct Refined {
    pub automaton: Automaton,
    /// For every refined state, the plant state and the visited flag.
    pub origin: Vec<(StateId, bool)>,
}

impl Refined {
    pub fn find(&self, x: StateId, visited: bool) -> Option<StateId> {
        self.origin
            .iter()
            .position(|o| *o == (x, visited))
            .map(|i| StateId(i as u32))
    }

    /// Refined states whose flag is still down, i.e. `X × {0}`.
    pub fn unvisited(&self) -> StateSet {
        self.origin
            .iter()
            .enumerate()
            .filter(|(_, (_, v))| !v)
            .map(|(i, _)| StateId(i as u32))
            .collect()
    }
}

/// Builds the reachable part of `G̃`. The flag is raised on entering a state
/// of `secret` (including the initial state) and never lowered.
pub fn refine_visited(aut: &Automaton, secret: &StateSet) -> Result<Refined> {
    for x in secret {
        if x.index() >= aut.num_states() {
            return Err(Error::UnknownState(format!("#{}", x.0)));
        }
    }
    let init = (aut.initial(), secret.contains(&aut.initial()));
    let mut origin = vec![init];
    let mut index = BTreeMap::from([(init, 0usize)]);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < origin.len() {
        let (x, flag) = origin[i];
        for (e, y) in aut.successors(x) {
            let next = (y, flag || secret.contains(&y));
            let j = *index.entry(next).or_insert_with(|| {
                origin.push(next);
                origin.len() - 1
            });
            trans.push((i, e, j));
        }
        i += 1;
    }
    let names: Vec<String> = origin
        .iter()
        .map(|(x, f)| format!("({},{})", aut.state_name(*x), u8::from(*f)))
        .collect();
    let mut b = Automaton::builder();
    for n in &names {
        b.add_state(n)?;
    }
    for e in aut.events() {
        b.add_event(aut.event_name(e))?;
    }
    b.set_initial(&names[0])?;
    for (i, e, j) in trans {
        b.add_transition(&names[i], aut.event_name(e), &names[j])?;
    }
    Ok(Refined {
        automaton: b.build()?,
        origin,
    })
}

/// Everything needed to decide one property.
#[derive(Clone, Debug)]
pub struct VerificationTask {
    /// The automaton verified against; refined for visit-tracking presets.
    pub model: Automaton,
    /// The original plant before any refinement.
    pub plant: Automaton,
    pub low: ObservationMap,
    pub high: ObservationMap,
    pub predicate: KnowledgePredicate,
    /// Conjunction; all admissible.
    pub patterns: Vec<Pattern>,
    pub delayed: bool,
    /// Secret states of `plant` for visit-tracking presets.
    pub secret: Option<StateSet>,
}

impl VerificationTask {
    pub fn new(
        plant: Automaton,
        low: ObservationMap,
        high: ObservationMap,
        predicate: KnowledgePredicate,
        patterns: Vec<Pattern>,
    ) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::NoPatterns);
        }
        Ok(VerificationTask {
            model: plant.clone(),
            plant,
            low,
            high,
            predicate,
            patterns,
            delayed: false,
            secret: None,
        })
    }
}

/// Named properties and their parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    HighOrderOpacity(TSpec),
    IntrusionUndetectability(StateSet),
    EpistemicDiagnosability(StateSet),
    HighOrderDetectability(TSpec),
    FiniteEpistemicDiagnosability(StateSet),
}

impl Preset {
    pub const NAMES: [&'static str; 5] = [
        "high-order-opacity",
        "intrusion-undetectability",
        "epistemic-diagnosability",
        "high-order-detectability",
        "finite-epistemic-diagnosability",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::HighOrderOpacity(_) => Self::NAMES[0],
            Preset::IntrusionUndetectability(_) => Self::NAMES[1],
            Preset::EpistemicDiagnosability(_) => Self::NAMES[2],
            Preset::HighOrderDetectability(_) => Self::NAMES[3],
            Preset::FiniteEpistemicDiagnosability(_) => Self::NAMES[4],
        }
    }

    /// Whether the preset is parameterized by a secret set rather than a pair specification.
    pub fn takes_secret(name: &str) -> Option<bool> {
        match name {
            "high-order-opacity" | "high-order-detectability" => Some(false),
            "intrusion-undetectability"
            | "epistemic-diagnosability"
            | "finite-epistemic-diagnosability" => Some(true),
            _ => None,
        }
    }
}

fn pattern(q: Quantifier, k_low: bool, k_high: KHigh) -> Pattern {
    Pattern::new(q, k_low, k_high).expect("preset patterns are admissible")
}

/// Reduces a named property to a pattern task on the plant or its refinement.
pub fn preset_task(
    preset: Preset,
    plant: &Automaton,
    low: &ObservationMap,
    high: &ObservationMap,
) -> Result<VerificationTask> {
    use Quantifier::*;
    let task = |model: Automaton, tspec: TSpec, patterns: Vec<Pattern>| VerificationTask {
        model,
        plant: plant.clone(),
        low: low.clone(),
        high: high.clone(),
        predicate: KnowledgePredicate::Dis(tspec),
        patterns,
        delayed: false,
        secret: None,
    };
    let check_tspec = |t: &TSpec| {
        if t.num_states() != plant.num_states() {
            Err(Error::UnknownState(
                "pair specification is over a different model".to_string(),
            ))
        } else {
            Ok(())
        }
    };
    Ok(match preset {
        Preset::HighOrderOpacity(t) => {
            check_tspec(&t)?;
            task(plant.clone(), t, vec![pattern(ForAll, true, KHigh::U)])
        }
        Preset::HighOrderDetectability(t) => {
            check_tspec(&t)?;
            task(
                plant.clone(),
                t,
                vec![
                    pattern(ForAll, true, KHigh::Y),
                    pattern(ForAll, false, KHigh::N),
                ],
            )
        }
        Preset::EpistemicDiagnosability(secret) => {
            let t = TSpec::nonsecret_square(plant, &secret)?;
            let mut tk = task(plant.clone(), t, vec![pattern(ForAll, true, KHigh::Y)]);
            tk.secret = Some(secret);
            tk
        }
        Preset::IntrusionUndetectability(secret) => {
            let refined = refine_visited(plant, &secret)?;
            let t = TSpec::square(&refined.automaton, &refined.unvisited())?;
            let mut tk = task(refined.automaton, t, vec![pattern(ForAll, true, KHigh::U)]);
            tk.secret = Some(secret);
            tk
        }
        Preset::FiniteEpistemicDiagnosability(secret) => {
            let refined = refine_visited(plant, &secret)?;
            let t = TSpec::square(&refined.automaton, &refined.unvisited())?;
            let mut tk = task(refined.automaton, t, vec![pattern(ForAll, true, KHigh::Y)]);
            tk.secret = Some(secret);
            tk.delayed = true;
            tk
        }
    })
}
