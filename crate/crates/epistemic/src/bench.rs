//! Construction sizes and timings per model and engine, as CSV.

use epistemic_core::{
    build_recognizer, EngineChoice, KHigh, KnowledgePredicate, Pattern, Quantifier, TSpec,
    VerificationTask, Verifier,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::model_file::ModelFile;
use crate::StdClock;

pub const HEADER: [&str; 8] = [
    "model",
    "engine",
    "recognizer_states",
    "estimator_states",
    "estimator_edges",
    "build_ms",
    "check_ms",
    "error",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub model: String,
    pub engine: String,
    pub recognizer_states: Option<usize>,
    pub estimator_states: Option<usize>,
    pub estimator_edges: Option<usize>,
    pub build_ms: Option<f64>,
    pub check_ms: Option<f64>,
    pub error: String,
}

/// Pattern each engine is timed on, with the distinct-pairs predicate.
fn probe(engine: EngineChoice) -> Pattern {
    let (q, k, h) = match engine {
        EngineChoice::Twin => (Quantifier::ForAll, true, KHigh::Y),
        _ => (Quantifier::ForAll, true, KHigh::U),
    };
    Pattern::new(q, k, h).expect("admissible")
}

pub fn bench_one(m: &ModelFile, engine: EngineChoice, engine_name: &str) -> Row {
    let mut row = Row {
        model: m.name.clone(),
        engine: engine_name.to_string(),
        recognizer_states: None,
        estimator_states: None,
        estimator_edges: None,
        build_ms: None,
        check_ms: None,
        error: String::new(),
    };
    let g = &m.automaton;
    let task = VerificationTask::new(
        g.clone(),
        m.low.clone(),
        m.high.clone(),
        KnowledgePredicate::Dis(TSpec::distinct(g)),
        vec![probe(engine)],
    );
    let clock = StdClock::new();
    let verdict = task.and_then(|t| {
        Verifier::new(engine)
            .allow_dead_states()
            .with_clock(&clock)
            .run(&t)
    });
    match verdict {
        Ok(v) => {
            let s = v.stats;
            // the state-pair engine never builds the recognizer; report its size anyway
            let rec = match s.recognizer_states {
                0 => build_recognizer(g, &m.low).len(),
                n => n,
            };
            row.recognizer_states = Some(rec);
            row.estimator_states = Some(s.estimator_states);
            row.estimator_edges = Some(s.estimator_edges);
            row.build_ms = Some(s.build_micros as f64 / 1000.0);
            row.check_ms = Some(s.check_micros as f64 / 1000.0);
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}

/// One row per `(model, engine)`, in input order.
pub fn bench(models: &[ModelFile], engines: &[(EngineChoice, String)]) -> Vec<Row> {
    let jobs: Vec<(&ModelFile, &(EngineChoice, String))> = models
        .iter()
        .flat_map(|m| engines.iter().map(move |e| (m, e)))
        .collect();
    jobs.par_iter()
        .map(|(m, (e, name))| bench_one(m, *e, name))
        .collect()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to Vec")).expect("utf-8")
}

/// Twin rows whose state count exceeds the square of the recognizer's.
pub fn twin_bound_violations(rows: &[Row]) -> Vec<&Row> {
    rows.iter()
        .filter(|r| r.engine == "twin")
        .filter(|r| match (r.recognizer_states, r.estimator_states) {
            (Some(n), Some(t)) => t > n * n,
            _ => false,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gen::{gen_random, GenParams};
    use crate::model_file::parse_model;

    fn engines() -> Vec<(EngineChoice, String)> {
        [
            EngineChoice::Double,
            EngineChoice::Twin,
            EngineChoice::Spair,
        ]
        .into_iter()
        .zip(["double", "twin", "spair"].map(String::from))
        .collect()
    }

    #[test]
    fn g1_rows() {
        let m = parse_model(fixtures::G1).unwrap();
        let rows = bench(&[m], &engines());
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].estimator_states, Some(6));
        assert_eq!(rows[2].estimator_states, Some(6));
        assert!(rows
            .iter()
            .all(|r| r.recognizer_states == Some(10) && r.error.is_empty()));
        let csv = to_csv(&rows);
        assert!(csv.starts_with("model,engine,recognizer_states,estimator_states,estimator_edges,build_ms,check_ms,error\n"));
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("G1,double,10,6,5,"));
    }

    #[test]
    fn growing_family_respects_twin_bound() {
        let models: Vec<ModelFile> = (1..=8)
            .map(|n| {
                gen_random(GenParams {
                    seed: n as u64,
                    states: n,
                    events: 3,
                    ..GenParams::default()
                })
            })
            .collect();
        let rows = bench(&models, &engines());
        assert_eq!(rows.len(), 24);
        assert!(twin_bound_violations(&rows).is_empty());
    }

    #[test]
    fn errors_become_rows() {
        let m = parse_model(fixtures::G1).unwrap();
        let rows = bench(
            &[m],
            &[
                (EngineChoice::Twin, "twin".into()),
                (EngineChoice::Spair, "spair".into()),
            ],
        );
        assert!(rows.iter().all(|r| r.error.is_empty()));
        let bad = Row {
            error: "boom".into(),
            ..rows[0].clone()
        };
        assert!(to_csv(&[bad]).contains(",boom"));
    }
}
