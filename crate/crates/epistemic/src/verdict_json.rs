//! JSON verdicts.

use std::fmt::Write;

use epistemic_core::verify::{format_events, format_symbols};
use epistemic_core::{Automaton, TwinEvent, Verdict, VerificationTask};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictJson {
    pub spec: String,
    pub holds: bool,
    pub engine: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    pub stats: StatsJson,
    #[serde(default)]
    pub interpretation_notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessJson {
    pub system_string: String,
    pub low_obs: String,
    pub high_obs: String,
    pub k_low: String,
    pub k_high: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confused_string: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lasso: Option<LassoJson>,
}

/// One step of the paired run; `null` where that copy stays put.
pub type StepJson = [Option<String>; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LassoJson {
    pub stem: Vec<StepJson>,
    pub cycle: Vec<StepJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StatsJson {
    pub recognizer_states: usize,
    pub estimator_states: usize,
    pub estimator_edges: usize,
    pub build_ms: f64,
    pub check_ms: f64,
}

fn steps(g: &Automaton, path: &[TwinEvent]) -> Vec<StepJson> {
    let name = |e: Option<_>| e.map(|e| g.event_name(e).to_string());
    path.iter()
        .map(|t| [name(t.first()), name(t.second())])
        .collect()
}

impl VerdictJson {
    pub fn new(spec: &str, task: &VerificationTask, v: &Verdict) -> Self {
        let g = &task.model;
        let witness = v.witness.as_ref().map(|w| WitnessJson {
            system_string: format_events(g, &w.system),
            low_obs: format_symbols(&task.low, &w.low_obs),
            high_obs: format_symbols(&task.high, &w.high_obs),
            k_low: if w.k_low { "T" } else { "F" }.to_string(),
            k_high: w.k_high.as_str().to_string(),
            confused_string: w.confused.as_ref().map(|s| format_events(g, s)),
            lasso: w.lasso.as_ref().map(|l| LassoJson {
                stem: steps(g, &l.stem),
                cycle: steps(g, &l.cycle),
            }),
        });
        VerdictJson {
            spec: spec.to_string(),
            holds: v.holds,
            engine: v.engine.as_str().to_string(),
            witness,
            stats: StatsJson {
                recognizer_states: v.stats.recognizer_states,
                estimator_states: v.stats.estimator_states,
                estimator_edges: v.stats.estimator_edges,
                build_ms: v.stats.build_micros as f64 / 1000.0,
                check_ms: v.stats.check_micros as f64 / 1000.0,
            },
            interpretation_notes: v.notes.clone(),
        }
    }
}

pub fn emit_verdict(v: &VerdictJson) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

pub fn parse_verdict(text: &str) -> serde_json::Result<VerdictJson> {
    serde_json::from_str(text)
}

fn show(s: &str) -> String {
    if s.is_empty() {
        "ε".to_string()
    } else {
        format!("\"{s}\"")
    }
}

fn show_steps(steps: &[StepJson]) -> String {
    let part = |e: &Option<String>| e.clone().unwrap_or_else(|| "-".into());
    let v: Vec<String> = steps
        .iter()
        .map(|[a, b]| format!("({},{})", part(a), part(b)))
        .collect();
    v.join(" ")
}

/// Human-readable account of a verdict.
pub fn explain(v: &VerdictJson) -> String {
    let mut out = String::new();
    let status = if v.holds { "holds" } else { "is violated" };
    let _ = writeln!(
        out,
        "{}: the property {status} (engine {}).",
        v.spec, v.engine
    );
    if let Some(w) = &v.witness {
        let low = match w.k_low.as_str() {
            "T" => "knows the predicate is true",
            _ => "does not know the predicate is true",
        };
        let high = match w.k_high.as_str() {
            "Y" => "is certain the low-level observer knows it",
            "N" => "is certain the low-level observer does not know it",
            _ => "cannot tell whether the low-level observer knows it",
        };
        let _ = writeln!(
            out,
            "Witness: the plant executes {}.",
            show(&w.system_string)
        );
        let _ = writeln!(
            out,
            "  The low-level observer sees {} and {low}.",
            show(&w.low_obs)
        );
        let _ = writeln!(
            out,
            "  The high-level observer sees {} and {high}.",
            show(&w.high_obs)
        );
        if let Some(c) = &w.confused_string {
            let _ = writeln!(
                out,
                "  {} looks the same to the high-level observer but leads to the opposite low-level knowledge.",
                show(c)
            );
        }
        if let Some(l) = &w.lasso {
            let _ = writeln!(out, "  Paired runs: stem {}", show_steps(&l.stem));
            let _ = writeln!(out, "  then repeat forever {}", show_steps(&l.cycle));
        }
    } else if v.holds {
        let _ = writeln!(out, "No counterexample exists.");
    }
    let s = &v.stats;
    let _ = writeln!(
        out,
        "Recognizer states: {}, estimator states: {} ({} edges), build {:.3} ms, check {:.3} ms.",
        s.recognizer_states, s.estimator_states, s.estimator_edges, s.build_ms, s.check_ms
    );
    for n in &v.interpretation_notes {
        let _ = writeln!(out, "Note: {n}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model_file::parse_model;
    use crate::spec_file::{parse_spec, resolve};
    use epistemic_core::{verify, EngineChoice};

    fn run(spec: &str, model: &str) -> VerdictJson {
        let m = parse_model(model).unwrap();
        let s = parse_spec(spec).unwrap();
        let t = resolve(&s, &m).unwrap();
        let v = verify(&t, EngineChoice::Auto).unwrap();
        VerdictJson::new(&s.name, &t, &v)
    }

    #[test]
    fn diagnosability_witness() {
        let v = run(
            "spec d\nmodel G1\nproperty epistemic-diagnosability secret 4\n",
            fixtures::G1,
        );
        assert!(!v.holds);
        let w = v.witness.as_ref().unwrap();
        assert_eq!(w.system_string, "cbdd");
        assert_eq!(w.confused_string.as_deref(), Some("cb"));
        let text = emit_verdict(&v);
        assert_eq!(parse_verdict(&text).unwrap(), v);
        let keys: Vec<&str> = [
            "\"spec\"",
            "\"holds\"",
            "\"engine\"",
            "\"witness\"",
            "\"stats\"",
            "\"interpretationNotes\"",
        ]
        .into_iter()
        .collect();
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
        assert!(explain(&v).contains("\"cbdd\""));
    }

    #[test]
    fn forall_holds_has_no_witness() {
        let v = run(
            "spec o\nmodel G1\npredicate dis distinct\npattern forall T U\n",
            fixtures::G1,
        );
        assert!(v.holds);
        let text = emit_verdict(&v);
        assert!(!text.contains("witness"));
        let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(raw["stats"]["estimatorStates"], 6);
    }

    #[test]
    fn lasso_steps_use_null() {
        let v = run(
            "spec f\nmodel G1\nproperty finite-epistemic-diagnosability secret 4\n",
            fixtures::G1,
        );
        assert!(v.holds);
        assert_eq!(v.engine, "cycle");
        let l = LassoJson {
            stem: vec![[Some("a".into()), None]],
            cycle: vec![[Some("b".into()), Some("b".into())]],
        };
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"stem":[["a",null]],"cycle":[["b","b"]]}"#);
    }
}
