//! Deciding epistemic properties: patterns, engines, verdicts and witnesses.

mod engines;
mod witness;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use engines::{check_double, check_finite_diag, check_spair, check_twin, Setting};
pub use witness::{lift_through_plant, lift_through_recognizer};

use crate::automaton::{Automaton, EventId};
use crate::estimators::{
    build_double, build_recognizer, build_state_pair, build_twin, classify, Classification,
    DoubleEstimator, Recognizer, StatePairEstimator, TwinEstimator, TwinEvent,
};
use crate::knowledge::{KnowledgePredicate, VerificationTask};
use crate::observation::{project, ObservationMap, Symbol};
use crate::oracle;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    ForAll,
    Exists,
}

/// The high-level observer's estimate of the low-level knowledge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KHigh {
    /// Knows the predicate holds.
    Y,
    /// Knows it does not hold.
    N,
    /// Unsure.
    U,
}

impl KHigh {
    /// Estimate over a nonempty collection of low-level values.
    pub fn of(has_true: bool, has_false: bool) -> KHigh {
        match (has_true, has_false) {
            (true, false) => KHigh::Y,
            (false, true) => KHigh::N,
            _ => KHigh::U,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KHigh::Y => "Y",
            KHigh::N => "N",
            KHigh::U => "U",
        }
    }
}

/// `⟨quantifier, Kw, k_low, k_high⟩`; the predicate lives in the task.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    quantifier: Quantifier,
    k_low: bool,
    k_high: KHigh,
}

impl Pattern {
    /// The eight admissible patterns, in canonical order.
    pub const ADMISSIBLE: [Pattern; 8] = [
        Pattern::raw(Quantifier::ForAll, true, KHigh::U),
        Pattern::raw(Quantifier::ForAll, false, KHigh::U),
        Pattern::raw(Quantifier::Exists, true, KHigh::Y),
        Pattern::raw(Quantifier::Exists, false, KHigh::N),
        Pattern::raw(Quantifier::ForAll, true, KHigh::Y),
        Pattern::raw(Quantifier::ForAll, false, KHigh::N),
        Pattern::raw(Quantifier::Exists, true, KHigh::U),
        Pattern::raw(Quantifier::Exists, false, KHigh::U),
    ];

    const fn raw(quantifier: Quantifier, k_low: bool, k_high: KHigh) -> Self {
        Pattern {
            quantifier,
            k_low,
            k_high,
        }
    }

    /// Rejects `(T, N)` and `(F, Y)`: the high-level observer can never be
    /// sure of a value the low-level observer does not have.
    pub fn new(quantifier: Quantifier, k_low: bool, k_high: KHigh) -> Result<Self> {
        let p = Pattern::raw(quantifier, k_low, k_high);
        match (k_low, k_high) {
            (true, KHigh::N) | (false, KHigh::Y) => Err(Error::InadmissiblePattern(p)),
            _ => Ok(p),
        }
    }

    pub fn quantifier(self) -> Quantifier {
        self.quantifier
    }

    pub fn k_low(self) -> bool {
        self.k_low
    }

    pub fn k_high(self) -> KHigh {
        self.k_high
    }

    /// Position (1-based) in [`ADMISSIBLE`](Self::ADMISSIBLE).
    pub fn number(self) -> usize {
        Self::ADMISSIBLE
            .iter()
            .position(|p| *p == self)
            .map(|i| i + 1)
            .expect("constructed patterns are admissible")
    }

    pub fn twin_decidable(self) -> bool {
        matches!(self.number(), 5..=8)
    }

    pub fn state_pair_decidable(self) -> bool {
        matches!(self.number(), 1 | 3)
    }

    /// Truth value when the quantifier ranges over nothing.
    pub fn vacuous(self) -> bool {
        self.quantifier == Quantifier::ForAll
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quantifier {
            Quantifier::ForAll => "forall",
            Quantifier::Exists => "exists",
        };
        let k = if self.k_low { "T" } else { "F" };
        write!(f, "<{q}, {k}, {}>", self.k_high.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Engine {
    Double,
    Twin,
    Spair,
    Oracle,
    Cycle,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Double => "double",
            Engine::Twin => "twin",
            Engine::Spair => "spair",
            Engine::Oracle => "oracle",
            Engine::Cycle => "cycle",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EngineChoice {
    #[default]
    Auto,
    Double,
    Twin,
    Spair,
    Oracle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub recognizer_states: usize,
    pub estimator_states: usize,
    pub estimator_edges: usize,
    pub build_micros: u64,
    pub check_micros: u64,
}

/// A twin-estimator lasso: a path to a cycle, then the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<TwinEvent>,
    pub cycle: Vec<TwinEvent>,
}

/// A concrete run demonstrating the verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub system: Vec<EventId>,
    pub low_obs: Vec<Symbol>,
    pub high_obs: Vec<Symbol>,
    /// Low-level knowledge after `system`.
    pub k_low: bool,
    /// High-level estimate after `system`.
    pub k_high: KHigh,
    /// A run with the same high observation but the opposite low-level value.
    pub confused: Option<Vec<EventId>>,
    pub lasso: Option<Lasso>,
}

impl Witness {
    pub(crate) fn new(
        low: &ObservationMap,
        high: &ObservationMap,
        system: Vec<EventId>,
        k_low: bool,
        k_high: KHigh,
        confused: Option<Vec<EventId>>,
    ) -> Result<Self> {
        Ok(Witness {
            low_obs: project(low, &system)?,
            high_obs: project(high, &system)?,
            system,
            k_low,
            k_high,
            confused,
            lasso: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub engine: Engine,
    pub stats: Stats,
    /// Index into the task's patterns of the conjunct that failed.
    pub failed_conjunct: Option<usize>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub(crate) fn new(holds: bool, engine: Engine, witness: Option<Witness>) -> Self {
        Verdict {
            holds,
            witness,
            engine,
            stats: Stats::default(),
            failed_conjunct: None,
            notes: Vec::new(),
        }
    }
}

/// Source of wall-clock time; `no_std` builds use [`NoClock`].
pub trait Clock {
    fn now_micros(&self) -> u64;
}

pub struct NoClock;

impl Clock for NoClock {
    fn now_micros(&self) -> u64 {
        0
    }
}

pub(crate) const CYCLE_NOTE: &str =
    "delayed check: a refuting cycle must contain an edge where both copies fire high-observable events";

/// Lazily built constructions shared by the conjuncts of one task.
struct Builds<'t> {
    setting: Setting<'t>,
    predicate: &'t KnowledgePredicate,
    rec: Option<(Recognizer, Classification)>,
    double: Option<DoubleEstimator>,
    twin: Option<TwinEstimator>,
    spair: Option<StatePairEstimator>,
    build_micros: u64,
}

impl<'t> Builds<'t> {
    fn timed<T>(clock: &dyn Clock, acc: &mut u64, f: impl FnOnce() -> T) -> T {
        let t0 = clock.now_micros();
        let out = f();
        *acc += clock.now_micros().saturating_sub(t0);
        out
    }

    fn rec(&mut self, clock: &dyn Clock) -> Result<()> {
        if self.rec.is_none() {
            let s = self.setting;
            let pred = self.predicate;
            let built = Self::timed(clock, &mut self.build_micros, || {
                let rec = build_recognizer(s.model, s.low);
                classify(&rec, pred).map(|cls| (rec, cls))
            })?;
            self.rec = Some(built);
        }
        Ok(())
    }

    fn double(&mut self, clock: &dyn Clock) -> Result<()> {
        self.rec(clock)?;
        if self.double.is_none() {
            let (rec, _) = self.rec.as_ref().expect("built");
            let high = self.setting.high;
            self.double = Some(Self::timed(clock, &mut self.build_micros, || {
                build_double(rec, high)
            }));
        }
        Ok(())
    }

    fn twin(&mut self, clock: &dyn Clock) -> Result<()> {
        self.rec(clock)?;
        if self.twin.is_none() {
            let (rec, _) = self.rec.as_ref().expect("built");
            let high = self.setting.high;
            self.twin = Some(Self::timed(clock, &mut self.build_micros, || {
                build_twin(rec, high)
            }));
        }
        Ok(())
    }

    fn spair(&mut self, clock: &dyn Clock) -> Result<()> {
        if self.spair.is_none() {
            let s = self.setting;
            self.spair = Some(Self::timed(clock, &mut self.build_micros, || {
                build_state_pair(s.model, s.low, s.high)
            }));
        }
        Ok(())
    }
}

/// Engine selection and liveness policy for [`verify`].
pub struct Verifier<'c> {
    pub engine: EngineChoice,
    pub require_live: bool,
    clock: &'c dyn Clock,
}

impl Verifier<'static> {
    pub fn new(engine: EngineChoice) -> Self {
        Verifier {
            engine,
            require_live: true,
            clock: &NoClock,
        }
    }
}

impl<'c> Verifier<'c> {
    pub fn with_clock<'d>(self, clock: &'d dyn Clock) -> Verifier<'d> {
        Verifier {
            engine: self.engine,
            require_live: self.require_live,
            clock,
        }
    }

    /// Verify models with reachable dead states (not for delayed properties).
    pub fn allow_dead_states(mut self) -> Self {
        self.require_live = false;
        self
    }

    /// The engine [`run`](Self::run) will use for `p`.
    pub fn select(&self, p: Pattern, predicate: &KnowledgePredicate) -> Result<Engine> {
        let is_dis = predicate.tspec().is_some();
        match self.engine {
            EngineChoice::Auto if is_dis && p.state_pair_decidable() => Ok(Engine::Spair),
            EngineChoice::Auto if p.twin_decidable() => Ok(Engine::Twin),
            EngineChoice::Auto | EngineChoice::Double => Ok(Engine::Double),
            EngineChoice::Oracle => Ok(Engine::Oracle),
            EngineChoice::Twin if p.twin_decidable() => Ok(Engine::Twin),
            EngineChoice::Twin => Err(Error::EngineMismatch {
                engine: Engine::Twin,
                pattern: p,
            }),
            EngineChoice::Spair if !is_dis => Err(Error::PredicateMismatch(Engine::Spair)),
            EngineChoice::Spair if p.state_pair_decidable() => Ok(Engine::Spair),
            EngineChoice::Spair => Err(Error::EngineMismatch {
                engine: Engine::Spair,
                pattern: p,
            }),
        }
    }

    pub fn run(&self, task: &VerificationTask) -> Result<Verdict> {
        if task.patterns.is_empty() {
            return Err(Error::NoPatterns);
        }
        let setting = Setting {
            model: &task.model,
            low: &task.low,
            high: &task.high,
        };
        if task.delayed {
            return self.run_delayed(task, setting);
        }
        if self.require_live {
            task.model.ensure_live()?;
        }
        let engines = task
            .patterns
            .iter()
            .map(|p| self.select(*p, &task.predicate))
            .collect::<Result<Vec<_>>>()?;

        let mut builds = Builds {
            setting,
            predicate: &task.predicate,
            rec: None,
            double: None,
            twin: None,
            spair: None,
            build_micros: 0,
        };
        let mut check_micros = 0;
        let mut last = None;
        for (i, (&p, &engine)) in task.patterns.iter().zip(&engines).enumerate() {
            let mut v = self.run_one(&mut builds, &mut check_micros, p, engine)?;
            v.stats.build_micros = builds.build_micros;
            v.stats.check_micros = check_micros;
            if let Some((rec, _)) = &builds.rec {
                v.stats.recognizer_states = rec.len();
            }
            if !v.holds {
                if task.patterns.len() > 1 {
                    v.failed_conjunct = Some(i);
                    v.notes.push(format!(
                        "conjunct {} of {} ({p}) is violated",
                        i + 1,
                        task.patterns.len()
                    ));
                }
                return Ok(v);
            }
            last = Some(v);
        }
        Ok(last.expect("at least one pattern"))
    }

    fn run_one(
        &self,
        b: &mut Builds<'_>,
        check_micros: &mut u64,
        p: Pattern,
        engine: Engine,
    ) -> Result<Verdict> {
        let clock = self.clock;
        let setting = b.setting;
        let (mut v, states, edges) = match engine {
            Engine::Double => {
                b.double(clock)?;
                let (rec, cls) = b.rec.as_ref().expect("built");
                let dbl = b.double.as_ref().expect("built");
                let v = Builds::timed(clock, check_micros, || {
                    check_double(setting, rec, cls, dbl, p)
                })?;
                (v, dbl.len(), dbl.graph.num_edges())
            }
            Engine::Twin => {
                b.twin(clock)?;
                let (rec, cls) = b.rec.as_ref().expect("built");
                let twin = b.twin.as_ref().expect("built");
                let v = Builds::timed(clock, check_micros, || {
                    check_twin(setting, rec, cls, twin, p)
                })?;
                (v, twin.len(), twin.graph.num_edges())
            }
            Engine::Spair => {
                b.spair(clock)?;
                let spe = b.spair.as_ref().expect("built");
                let tspec = b
                    .predicate
                    .tspec()
                    .ok_or(Error::PredicateMismatch(Engine::Spair))?;
                let v = Builds::timed(clock, check_micros, || check_spair(setting, spe, tspec, p))?;
                (v, spe.len(), spe.graph.num_edges())
            }
            Engine::Oracle => {
                let pred = b.predicate;
                let (v, nodes) = Builds::timed(clock, check_micros, || {
                    oracle::oracle_verdict(setting.model, setting.low, setting.high, pred, p)
                })?;
                (v, nodes, 0)
            }
            Engine::Cycle => unreachable!("cycle engine is only used for delayed tasks"),
        };
        v.stats.estimator_states = states;
        v.stats.estimator_edges = edges;
        Ok(v)
    }

    fn run_delayed(&self, task: &VerificationTask, setting: Setting<'_>) -> Result<Verdict> {
        let clock = self.clock;
        let secret = task.secret.as_ref().ok_or(Error::MissingSecret)?;
        task.model.ensure_live()?;
        let mut v = match self.engine {
            EngineChoice::Auto | EngineChoice::Twin => {
                let mut build = 0;
                let (rec, cls, twin) = Builds::timed(clock, &mut build, || {
                    let rec = build_recognizer(setting.model, setting.low);
                    let cls = classify(&rec, &task.predicate)?;
                    let twin = build_twin(&rec, setting.high);
                    Ok::<_, Error>((rec, cls, twin))
                })?;
                let mut check = 0;
                let mut v = Builds::timed(clock, &mut check, || {
                    check_finite_diag(setting, &rec, &cls, &twin)
                })?;
                v.stats = Stats {
                    recognizer_states: rec.len(),
                    estimator_states: twin.len(),
                    estimator_edges: twin.graph.num_edges(),
                    build_micros: build,
                    check_micros: check,
                };
                v
            }
            EngineChoice::Oracle => {
                let mut check = 0;
                let (v, nodes) = Builds::timed(clock, &mut check, || {
                    oracle::oracle_finite_diag_verdict(
                        &task.plant,
                        setting.low,
                        setting.high,
                        secret,
                    )
                })?;
                let mut v = v;
                v.stats.estimator_states = nodes;
                v.stats.check_micros = check;
                v
            }
            EngineChoice::Double => return Err(Error::DelayedEngine(Engine::Double)),
            EngineChoice::Spair => return Err(Error::DelayedEngine(Engine::Spair)),
        };
        v.notes.push(String::from(CYCLE_NOTE));
        Ok(v)
    }
}

/// Decide `task` with the default liveness policy.
pub fn verify(task: &VerificationTask, engine: EngineChoice) -> Result<Verdict> {
    Verifier::new(engine).run(task)
}

/// Render an event string with the model's names; single-character names
/// are concatenated, longer ones separated by spaces.
pub fn format_events(aut: &Automaton, s: &[EventId]) -> String {
    let compact = aut.events().all(|e| aut.event_name(e).chars().count() == 1);
    let names: Vec<&str> = s.iter().map(|e| aut.event_name(*e)).collect();
    if compact {
        names.concat()
    } else {
        names.join(" ")
    }
}

pub fn format_symbols(h: &ObservationMap, s: &[Symbol]) -> String {
    let compact = h.symbols().all(|o| h.symbol_name(o).chars().count() == 1);
    let names: Vec<&str> = s.iter().map(|o| h.symbol_name(*o)).collect();
    if compact {
        names.concat()
    } else {
        names.join(" ")
    }
}
