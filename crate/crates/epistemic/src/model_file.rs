//! Line-oriented model files.
//!
//! ```text
//! model G1
//! states 0 1 2
//! init 0
//! events a b
//! trans 0 a 1
//! obs lo a _
//! obs hi a a
//! set secret 2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use epistemic_core::{Automaton, ObservationMap, StateSet};

use crate::ParseError;

/// A parsed model: plant, both observers and named state sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub name: String,
    pub automaton: Automaton,
    pub low: ObservationMap,
    pub high: ObservationMap,
    pub sets: BTreeMap<String, StateSet>,
    /// Leading comment lines, kept on emit.
    pub header: Vec<String>,
}

impl ModelFile {
    pub fn set(&self, name: &str) -> Option<&StateSet> {
        self.sets.get(name)
    }

    /// Resolves state names.
    pub fn states(&self, names: &[&str]) -> Result<StateSet, String> {
        names
            .iter()
            .map(|n| {
                self.automaton
                    .state_id(n)
                    .ok_or_else(|| format!("unknown state `{n}`"))
            })
            .collect()
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Splits off comments and blank lines; yields `(line number, tokens)`.
pub(crate) fn tokenize(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let header: Vec<String> = text
        .lines()
        .take_while(|l| l.trim_start().starts_with('#'))
        .map(|l| l.trim_start().trim_start_matches('#').trim().to_string())
        .collect();

    let mut name = None;
    let mut states: Vec<(usize, String)> = Vec::new();
    let mut events: Vec<(usize, String)> = Vec::new();
    let mut init = None;
    let mut trans = Vec::new();
    let mut obs_lo = Vec::new();
    let mut obs_hi = Vec::new();
    let mut sets: Vec<(usize, String, Vec<String>)> = Vec::new();

    for (ln, toks) in tokenize(text) {
        let args = &toks[1..];
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match toks[0] {
            "model" => {
                if args.len() != 1 {
                    return Err(err(ln, "expected `model NAME`"));
                }
                if name.is_some() {
                    return Err(err(ln, "duplicate `model` line"));
                }
                name = Some(args[0].to_string());
            }
            "states" => states.extend(args.iter().map(|s| (ln, s.to_string()))),
            "events" => events.extend(args.iter().map(|s| (ln, s.to_string()))),
            "init" => {
                if args.len() != 1 {
                    return Err(err(ln, "expected `init STATE`"));
                }
                if init.is_some() {
                    return Err(err(ln, "duplicate `init` line"));
                }
                init = Some((ln, args[0].to_string()));
            }
            "trans" => {
                if args.len() != 3 {
                    return Err(err(ln, "expected `trans SRC EVENT DST`"));
                }
                trans.push((ln, own(args)));
            }
            "obs" => {
                if args.len() != 3 {
                    return Err(err(ln, "expected `obs lo|hi EVENT OUTPUT|_`"));
                }
                let out = (args[2] != "_").then(|| args[2].to_string());
                let entry = (ln, args[1].to_string(), out);
                match args[0] {
                    "lo" => obs_lo.push(entry),
                    "hi" => obs_hi.push(entry),
                    other => {
                        return Err(err(
                            ln,
                            format!("unknown observer `{other}`, expected lo or hi"),
                        ))
                    }
                }
            }
            "set" => {
                if args.is_empty() {
                    return Err(err(ln, "expected `set NAME STATE...`"));
                }
                sets.push((ln, args[0].to_string(), own(&args[1..])));
            }
            other => return Err(err(ln, format!("unknown keyword `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| err(0, "missing `model NAME` line"))?;
    let mut b = Automaton::builder();
    for (ln, s) in &states {
        b.add_state(s).map_err(|e| err(*ln, e.to_string()))?;
    }
    for (ln, e) in &events {
        b.add_event(e).map_err(|x| err(*ln, x.to_string()))?;
    }
    let (ln, x0) = init.ok_or_else(|| err(0, "missing `init STATE` line"))?;
    b.set_initial(&x0).map_err(|e| err(ln, e.to_string()))?;
    for (ln, t) in &trans {
        b.add_transition(&t[0], &t[1], &t[2])
            .map_err(|e| err(*ln, e.to_string()))?;
    }
    let report = b.validate();
    if let Some((s, e)) = report.nondeterministic.first() {
        let ln = trans
            .iter()
            .filter(|(_, t)| &t[0] == s && &t[1] == e)
            .nth(1)
            .map_or(0, |(ln, _)| *ln);
        return Err(err(
            ln,
            format!("nondeterministic transitions from `{s}` on `{e}`"),
        ));
    }
    let automaton = b.build().map_err(|e| err(0, e.to_string()))?;

    let map = |entries: &[(usize, String, Option<String>)], role: &str| {
        for (ln, e, _) in entries {
            if automaton.event_id(e).is_none() {
                return Err(err(*ln, format!("unknown event `{e}`")));
            }
        }
        let mut seen = BTreeMap::new();
        for (ln, e, _) in entries {
            if seen.insert(e.as_str(), *ln).is_some() {
                return Err(err(
                    *ln,
                    format!("duplicate `obs {role}` entry for event `{e}`"),
                ));
            }
        }
        ObservationMap::from_outputs(
            &automaton,
            entries.iter().map(|(_, e, o)| (e.as_str(), o.as_deref())),
        )
        .map_err(|e| err(0, format!("observer {role}: {e}")))
    };
    let low = map(&obs_lo, "lo")?;
    let high = map(&obs_hi, "hi")?;

    let mut named = BTreeMap::new();
    for (ln, n, ids) in sets {
        let mut set = Vec::new();
        for id in &ids {
            set.push(
                automaton
                    .state_id(id)
                    .ok_or_else(|| err(ln, format!("unknown state `{id}` in set `{n}`")))?,
            );
        }
        if named.insert(n.clone(), set.into_iter().collect()).is_some() {
            return Err(err(ln, format!("duplicate set `{n}`")));
        }
    }

    Ok(ModelFile {
        name,
        automaton,
        low,
        high,
        sets: named,
        header,
    })
}

pub fn emit_model(m: &ModelFile) -> String {
    let g = &m.automaton;
    let mut out = String::new();
    for h in &m.header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "model {}", m.name);
    let names: Vec<&str> = g.states().map(|x| g.state_name(x)).collect();
    let _ = writeln!(out, "states {}", names.join(" "));
    let _ = writeln!(out, "init {}", g.state_name(g.initial()));
    let evs: Vec<&str> = g.events().map(|e| g.event_name(e)).collect();
    let _ = writeln!(out, "events {}", evs.join(" "));
    for (x, e, y) in g.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {}",
            g.state_name(x),
            g.event_name(e),
            g.state_name(y)
        );
    }
    for (role, h) in [("lo", &m.low), ("hi", &m.high)] {
        for e in g.events() {
            let o = h.output(e).map_or("_", |o| h.symbol_name(o));
            let _ = writeln!(out, "obs {role} {} {o}", g.event_name(e));
        }
    }
    for (n, s) in &m.sets {
        let ids: Vec<&str> = s.iter().map(|x| g.state_name(*x)).collect();
        let _ = writeln!(out, "set {n} {}", ids.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn g1_fixture() {
        let m = parse_model(fixtures::G1).unwrap();
        assert_eq!(m.name, "G1");
        assert_eq!(m.automaton.num_states(), 8);
        assert_eq!(m.automaton.num_transitions(), 9);
        assert!(m.automaton.validate().is_empty());
        assert_eq!(m.low.observable_events().count(), 2);
    }

    #[test]
    fn g0_fixture_has_yellow() {
        let m = parse_model(fixtures::G0).unwrap();
        assert_eq!(
            m.set("yellow").unwrap(),
            &m.states(&["0", "2", "3", "6"]).unwrap()
        );
    }

    #[test]
    fn round_trip() {
        for text in [fixtures::G0, fixtures::G1] {
            let m = parse_model(text).unwrap();
            let again = parse_model(&emit_model(&m)).unwrap();
            assert_eq!(again, m);
        }
    }

    #[test]
    fn errors_carry_lines() {
        let text = "model M\nstates 0 1\ninit 0\nevents a\ntrans 0 a 9\nobs lo a _\nobs hi a a\n";
        let e = parse_model(text).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains("`9`"), "{e}");

        let dup = "model M\nstates 0 0\n";
        assert_eq!(parse_model(dup).unwrap_err().line, 2);

        let nd = "model M\nstates 0 1\ninit 0\nevents a\ntrans 0 a 1\ntrans 0 a 0\nobs lo a a\nobs hi a a\n";
        assert_eq!(parse_model(nd).unwrap_err().line, 6);

        let missing = "model M\nstates 0\ninit 0\nevents a\ntrans 0 a 0\nobs lo a a\n";
        assert!(parse_model(missing).unwrap_err().message.contains("hi"));

        assert!(parse_model("model M\nfoo\n")
            .unwrap_err()
            .message
            .contains("foo"));
    }
}
