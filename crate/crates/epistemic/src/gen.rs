//! Seeded random models.

use std::collections::BTreeMap;

use epistemic_core::{Automaton, ObservationMap, StateSet, TSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model_file::ModelFile;

/// Event used to repair dead states; silent for both observers.
pub const REPAIR_EVENT: &str = "tau";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    pub states: usize,
    pub events: usize,
    /// Probability that a free `(state, event)` slot gets a transition.
    pub density: f64,
    pub p_low: f64,
    pub p_high: f64,
    /// Probability that an observable event reuses the output of an earlier one.
    pub p_relabel: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            states: 5,
            events: 3,
            density: 0.4,
            p_low: 0.5,
            p_high: 0.5,
            p_relabel: 0.2,
        }
    }
}

fn event_name(i: usize) -> String {
    if i < 20 {
        // skip `t` so that `tau` never collides
        let c = b"abcdefghijklmnopqrsu"[i] as char;
        c.to_string()
    } else {
        format!("e{i}")
    }
}

fn observer(
    rng: &mut ChaCha8Rng,
    events: &[String],
    p: f64,
    p_relabel: f64,
) -> Vec<Option<String>> {
    let mut used: Vec<String> = Vec::new();
    events
        .iter()
        .map(|e| {
            if !rng.gen_bool(p) {
                return None;
            }
            let out = if !used.is_empty() && rng.gen_bool(p_relabel) {
                used.choose(rng).expect("non-empty").clone()
            } else {
                e.clone()
            };
            if !used.contains(&out) {
                used.push(out.clone());
            }
            Some(out)
        })
        .collect()
}

/// Generates a model; every state is reachable and dead states get a
/// silent self-loop on [`REPAIR_EVENT`], listed in the header.
pub fn gen_random(p: GenParams) -> ModelFile {
    assert!(
        p.states >= 1 && p.events >= 1,
        "need at least one state and one event"
    );
    assert!(
        p.density > 0.0 && p.density <= 1.0,
        "density must be in (0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (n, k) = (p.states, p.events);
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; k]; n];

    // spanning tree from state 0 so that nothing is unreachable
    for i in 1..n {
        let slots: Vec<(usize, usize)> = (0..i)
            .flat_map(|x| (0..k).map(move |e| (x, e)))
            .filter(|&(x, e)| delta[x][e].is_none())
            .collect();
        let &(x, e) = slots.choose(&mut rng).expect("state i-1 has free slots");
        delta[x][e] = Some(i);
    }
    for row in delta.iter_mut() {
        for slot in row.iter_mut() {
            if slot.is_none() && rng.gen_bool(p.density) {
                *slot = Some(rng.gen_range(0..n));
            }
        }
    }

    let events: Vec<String> = (0..k).map(event_name).collect();
    let lo = observer(&mut rng, &events, p.p_low, p.p_relabel);
    let hi = observer(&mut rng, &events, p.p_high, p.p_relabel);
    let dead: Vec<usize> = (0..n)
        .filter(|&x| delta[x].iter().all(Option::is_none))
        .collect();

    let mut b = Automaton::builder();
    for x in 0..n {
        b.add_state(&x.to_string()).expect("fresh state");
    }
    for e in &events {
        b.add_event(e).expect("fresh event");
    }
    if !dead.is_empty() {
        b.add_event(REPAIR_EVENT).expect("fresh event");
    }
    b.set_initial("0").expect("declared");
    for (x, row) in delta.iter().enumerate() {
        for (e, y) in row.iter().enumerate() {
            if let Some(y) = y {
                b.add_transition(&x.to_string(), &events[e], &y.to_string())
                    .expect("declared");
            }
        }
    }
    for &x in &dead {
        b.add_transition(&x.to_string(), REPAIR_EVENT, &x.to_string())
            .expect("declared");
    }
    let g = b.build().expect("deterministic by construction");

    let map = |outs: &[Option<String>]| {
        let mut entries: Vec<(&str, Option<&str>)> = events
            .iter()
            .zip(outs)
            .map(|(e, o)| (e.as_str(), o.as_deref()))
            .collect();
        if !dead.is_empty() {
            entries.push((REPAIR_EVENT, None));
        }
        ObservationMap::from_outputs(&g, entries).expect("total by construction")
    };
    let low = map(&lo);
    let high = map(&hi);

    let mut header = vec![format!(
        "generated: seed={} states={} events={} density={} p_low={} p_high={} p_relabel={}",
        p.seed, p.states, p.events, p.density, p.p_low, p.p_high, p.p_relabel
    )];
    if !dead.is_empty() {
        let ids: Vec<String> = dead.iter().map(usize::to_string).collect();
        header.push(format!(
            "dead states repaired with a silent self-loop on {REPAIR_EVENT}: {}",
            ids.join(" ")
        ));
    }
    ModelFile {
        name: format!("R{}", p.seed),
        automaton: g,
        low,
        high,
        sets: BTreeMap::new(),
        header,
    }
}

/// Random pair specification: each ordered pair is included with probability `p`.
pub fn random_tspec(g: &Automaton, seed: u64, p: f64) -> TSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7470_6563);
    let pairs: Vec<_> = g
        .states()
        .flat_map(|a| g.states().map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    TSpec::new(g, pairs).expect("states of g")
}

/// Random non-empty proper secret set when possible.
pub fn random_secret(g: &Automaton, seed: u64) -> StateSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7365_6372);
    let mut s: StateSet = g.states().filter(|_| rng.gen_bool(0.35)).collect();
    if s.is_empty() {
        s.insert(g.states().last().expect("at least one state"));
    }
    s
}

/// Parameters of the `i`-th model of a seeded suite: sizes and
/// observability vary with the index.
pub fn suite_params(seed: u64, i: usize, max_states: usize, max_events: usize) -> GenParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i as u64);
    let obs = [0.0, 0.3, 0.5, 0.7, 1.0];
    GenParams {
        seed: seed.wrapping_add(i as u64),
        states: rng.gen_range(1..=max_states),
        events: rng.gen_range(1..=max_events),
        density: [0.2, 0.4, 0.6, 1.0][rng.gen_range(0..4)],
        p_low: obs[rng.gen_range(0..obs.len())],
        p_high: obs[rng.gen_range(0..obs.len())],
        p_relabel: 0.25,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_file::{emit_model, parse_model};
    use epistemic_core::{build_recognizer, StateSet};

    #[test]
    fn deterministic() {
        let p = GenParams {
            seed: 42,
            ..GenParams::default()
        };
        assert_eq!(emit_model(&gen_random(p)), emit_model(&gen_random(p)));
        let q = GenParams { seed: 43, ..p };
        assert_ne!(emit_model(&gen_random(p)), emit_model(&gen_random(q)));
    }

    #[test]
    fn suite_passes_validate_and_round_trips() {
        for i in 0..500 {
            let m = gen_random(suite_params(7, i, 6, 4));
            assert!(
                m.automaton.validate().is_empty(),
                "model {i}: {}",
                m.automaton.validate()
            );
            assert_eq!(parse_model(&emit_model(&m)).unwrap(), m);
        }
    }

    #[test]
    fn full_observability_gives_singleton_estimates() {
        for seed in 0..20 {
            let m = gen_random(GenParams {
                seed,
                density: 1.0,
                p_low: 1.0,
                p_relabel: 0.0,
                ..GenParams::default()
            });
            let rec = build_recognizer(&m.automaton, &m.low);
            for i in 0..rec.len() {
                let q = rec.state(i);
                assert_eq!(q.estimate, StateSet::singleton(q.state));
            }
        }
    }

    #[test]
    fn repair_is_recorded() {
        let m = gen_random(GenParams {
            seed: 1,
            states: 3,
            events: 1,
            density: 0.0001,
            ..GenParams::default()
        });
        assert!(m.header.iter().any(|h| h.contains(REPAIR_EVENT)));
        assert!(m.automaton.is_live());
    }
}
