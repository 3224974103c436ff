//! Engine-versus-oracle and engine-versus-engine agreement on seeded random models.

use epistemic_core::{
    preset_task, verify, EngineChoice, KnowledgePredicate, Pattern, Preset, TSpec, VerificationTask,
};
use rayon::prelude::*;

use crate::gen::{gen_random, random_secret, random_tspec, suite_params};

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub seed: u64,
    pub models: usize,
    pub max_states: usize,
    pub max_events: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            models: 500,
            max_states: 6,
            max_events: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub model: usize,
    pub check: &'static str,
    pub detail: String,
}

/// Comparison counts per check; `disagreements` lists every mismatch in model order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub models: usize,
    pub auto_vs_oracle: usize,
    pub twin_vs_double: usize,
    pub spair_vs_double: usize,
    pub finite_vs_oracle: usize,
    pub implication: usize,
    pub disagreements: Vec<Disagreement>,
}

impl Report {
    fn merge(mut self, o: Report) -> Report {
        self.models += o.models;
        self.auto_vs_oracle += o.auto_vs_oracle;
        self.twin_vs_double += o.twin_vs_double;
        self.spair_vs_double += o.spair_vs_double;
        self.finite_vs_oracle += o.finite_vs_oracle;
        self.implication += o.implication;
        self.disagreements.extend(o.disagreements);
        self
    }

    pub fn count(&self, check: &str) -> usize {
        self.disagreements
            .iter()
            .filter(|d| d.check == check)
            .count()
    }
}

fn holds(t: &VerificationTask, e: EngineChoice) -> Result<bool, String> {
    verify(t, e).map(|v| v.holds).map_err(|e| e.to_string())
}

fn compare(
    r: &mut Report,
    model: usize,
    check: &'static str,
    what: &str,
    a: Result<bool, String>,
    b: Result<bool, String>,
) {
    if a != b {
        r.disagreements.push(Disagreement {
            model,
            check,
            detail: format!("{what}: {a:?} vs {b:?}"),
        });
    }
}

fn check_model(cfg: &Config, i: usize) -> Report {
    let m = gen_random(suite_params(cfg.seed, i, cfg.max_states, cfg.max_events));
    let (g, lo, hi) = (&m.automaton, &m.low, &m.high);
    let mut r = Report {
        models: 1,
        ..Report::default()
    };
    let preds = [
        ("distinct", TSpec::distinct(g)),
        (
            "random",
            random_tspec(g, cfg.seed.wrapping_add(i as u64), 0.2),
        ),
    ];
    for (pname, tspec) in preds {
        for p in Pattern::ADMISSIBLE {
            let t = VerificationTask::new(
                g.clone(),
                lo.clone(),
                hi.clone(),
                KnowledgePredicate::Dis(tspec.clone()),
                vec![p],
            )
            .expect("one pattern");
            let what = format!("{pname} {p}");
            let double = holds(&t, EngineChoice::Double);
            compare(
                &mut r,
                i,
                "auto-vs-oracle",
                &what,
                holds(&t, EngineChoice::Auto),
                holds(&t, EngineChoice::Oracle),
            );
            r.auto_vs_oracle += 1;
            if p.twin_decidable() {
                compare(
                    &mut r,
                    i,
                    "twin-vs-double",
                    &what,
                    holds(&t, EngineChoice::Twin),
                    double.clone(),
                );
                r.twin_vs_double += 1;
            }
            if p.state_pair_decidable() {
                compare(
                    &mut r,
                    i,
                    "spair-vs-double",
                    &what,
                    holds(&t, EngineChoice::Spair),
                    double.clone(),
                );
                r.spair_vs_double += 1;
            }
        }
    }

    let secret = random_secret(g, cfg.seed.wrapping_add(i as u64));
    let t = preset_task(Preset::FiniteEpistemicDiagnosability(secret), g, lo, hi)
        .expect("generated models are valid");
    let finite = holds(&t, EngineChoice::Auto);
    compare(
        &mut r,
        i,
        "finite-vs-oracle",
        "finite diagnosability",
        finite.clone(),
        holds(&t, EngineChoice::Oracle),
    );
    r.finite_vs_oracle += 1;
    let mut inst = t;
    inst.delayed = false;
    if holds(&inst, EngineChoice::Auto) == Ok(true) {
        r.implication += 1;
        if finite != Ok(true) {
            r.disagreements.push(Disagreement {
                model: i,
                check: "implication",
                detail: format!("instantaneous holds but delayed gives {finite:?}"),
            });
        }
    }
    r
}

/// Runs the suite in parallel; the report does not depend on scheduling.
pub fn run(cfg: &Config) -> Report {
    (0..cfg.models)
        .into_par_iter()
        .map(|i| check_model(cfg, i))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Report::default(), Report::merge)
}
