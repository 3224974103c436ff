//! Specification files: which model, which property, which engine.
//!
//! ```text
//! spec g1-opacity
//! model G1
//! predicate dis distinct
//! pattern forall T U
//! engine auto
//! ```
//!
//! Instead of `predicate`/`pattern` lines a spec may name a preset:
//! `property epistemic-diagnosability secret 4`.

use std::fmt::Write;
use std::path::Path;

use epistemic_core::{
    preset_task, EngineChoice, KHigh, KnowledgePredicate, Pattern, Preset, Quantifier, StateId,
    StateSet, TSpec, VerificationTask,
};

use crate::model_file::{parse_model, tokenize, ModelFile};
use crate::{fixtures, ParseError};

/// A state set written either as a set name from the model or as state ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetRef {
    Named(String),
    Ids(Vec<String>),
}

/// How the pair specification of a distinguishability predicate is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSpec {
    Distinct,
    Pairs(Vec<(String, String)>),
    Square(SetRef),
    NonsecretSquare(SetRef),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Patterns {
        predicate: PairSpec,
        patterns: Vec<Pattern>,
    },
    Property {
        preset: String,
        pairs: Option<PairSpec>,
        secret: Option<SetRef>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub name: String,
    pub model: String,
    pub body: Body,
    pub engine: Option<EngineChoice>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_engine(s: &str) -> Option<EngineChoice> {
    Some(match s {
        "auto" => EngineChoice::Auto,
        "double" => EngineChoice::Double,
        "twin" => EngineChoice::Twin,
        "spair" => EngineChoice::Spair,
        "oracle" => EngineChoice::Oracle,
        _ => return None,
    })
}

pub fn engine_name(e: EngineChoice) -> &'static str {
    match e {
        EngineChoice::Auto => "auto",
        EngineChoice::Double => "double",
        EngineChoice::Twin => "twin",
        EngineChoice::Spair => "spair",
        EngineChoice::Oracle => "oracle",
    }
}

fn parse_pairs(ln: usize, args: &[&str]) -> Result<Vec<(String, String)>, ParseError> {
    let joined: String = args.concat();
    let mut out = Vec::new();
    let mut rest = joined.as_str();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| err(ln, "expected pairs written as (a,b)(c,d)..."))?;
        let (a, b) = inner
            .0
            .split_once(',')
            .ok_or_else(|| err(ln, format!("malformed pair `({})`", inner.0)))?;
        if a.is_empty() || b.is_empty() {
            return Err(err(ln, format!("malformed pair `({})`", inner.0)));
        }
        out.push((a.to_string(), b.to_string()));
        rest = inner.1;
    }
    if out.is_empty() {
        return Err(err(ln, "`pairs` needs at least one pair"));
    }
    Ok(out)
}

fn set_ref(ln: usize, args: &[&str]) -> Result<SetRef, ParseError> {
    match args {
        [] => Err(err(ln, "expected a set name or state ids")),
        [one] => Ok(SetRef::Named(one.to_string())),
        ids => Ok(SetRef::Ids(ids.iter().map(|s| s.to_string()).collect())),
    }
}

fn pair_spec(ln: usize, args: &[&str]) -> Result<PairSpec, ParseError> {
    match args {
        ["distinct"] => Ok(PairSpec::Distinct),
        ["pairs", rest @ ..] => Ok(PairSpec::Pairs(parse_pairs(ln, rest)?)),
        ["square", rest @ ..] => Ok(PairSpec::Square(set_ref(ln, rest)?)),
        ["nonsecret-square", rest @ ..] => Ok(PairSpec::NonsecretSquare(set_ref(ln, rest)?)),
        _ => Err(err(
            ln,
            "expected `distinct`, `pairs (a,b)...`, `square SET` or `nonsecret-square SET`",
        )),
    }
}

fn parse_pattern(ln: usize, args: &[&str]) -> Result<Pattern, ParseError> {
    let [q, k, h] = args else {
        return Err(err(ln, "expected `pattern forall|exists T|F Y|N|U`"));
    };
    let q = match *q {
        "forall" => Quantifier::ForAll,
        "exists" => Quantifier::Exists,
        other => return Err(err(ln, format!("unknown quantifier `{other}`"))),
    };
    let k = match *k {
        "T" => true,
        "F" => false,
        other => {
            return Err(err(
                ln,
                format!("low-level value must be T or F, got `{other}`"),
            ))
        }
    };
    let h = match *h {
        "Y" => KHigh::Y,
        "N" => KHigh::N,
        "U" => KHigh::U,
        other => {
            return Err(err(
                ln,
                format!("high-level value must be Y, N or U, got `{other}`"),
            ))
        }
    };
    Pattern::new(q, k, h).map_err(|e| err(ln, e.to_string()))
}

pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut name = None;
    let mut model = None;
    let mut predicate = None;
    let mut patterns = Vec::new();
    let mut property = None;
    let mut engine = None;

    let mut set_engine = |ln: usize, e: &str| {
        let choice = parse_engine(e).ok_or_else(|| err(ln, format!("unknown engine `{e}`")))?;
        if engine.replace(choice).is_some() {
            return Err(err(ln, "engine given twice"));
        }
        Ok(())
    };

    for (ln, toks) in tokenize(text) {
        let args = &toks[1..];
        match toks[0] {
            "spec" | "model" => {
                let [v] = args else {
                    return Err(err(ln, format!("expected `{} NAME`", toks[0])));
                };
                let slot = if toks[0] == "spec" {
                    &mut name
                } else {
                    &mut model
                };
                if slot.replace(v.to_string()).is_some() {
                    return Err(err(ln, format!("duplicate `{}` line", toks[0])));
                }
            }
            "predicate" => {
                let ["dis", rest @ ..] = args else {
                    return Err(err(ln, "only `predicate dis ...` is supported"));
                };
                if predicate.replace(pair_spec(ln, rest)?).is_some() {
                    return Err(err(ln, "duplicate `predicate` line"));
                }
            }
            "pattern" => {
                let (pat, eng) = match args {
                    [p @ .., "engine", e] => (p, Some(*e)),
                    p => (p, None),
                };
                patterns.push(parse_pattern(ln, pat)?);
                if let Some(e) = eng {
                    set_engine(ln, e)?;
                }
            }
            "property" => {
                let [preset, rest @ ..] = args else {
                    return Err(err(ln, "expected `property PRESET ARGS...`"));
                };
                let Some(takes_secret) = Preset::takes_secret(preset) else {
                    return Err(err(
                        ln,
                        format!(
                            "unknown preset `{preset}`; known: {}",
                            Preset::NAMES.join(", ")
                        ),
                    ));
                };
                let body = if takes_secret {
                    let secret = match rest {
                        ["set", n] => SetRef::Named(n.to_string()),
                        ["secret", ids @ ..] if !ids.is_empty() => {
                            SetRef::Ids(ids.iter().map(|s| s.to_string()).collect())
                        }
                        _ => {
                            return Err(err(
                                ln,
                                format!("`{preset}` expects `secret ID...` or `set NAME`"),
                            ))
                        }
                    };
                    Body::Property {
                        preset: preset.to_string(),
                        pairs: None,
                        secret: Some(secret),
                    }
                } else {
                    Body::Property {
                        preset: preset.to_string(),
                        pairs: Some(pair_spec(ln, rest)?),
                        secret: None,
                    }
                };
                if property.replace(body).is_some() {
                    return Err(err(ln, "duplicate `property` line"));
                }
            }
            "engine" => {
                let [e] = args else {
                    return Err(err(ln, "expected `engine auto|double|twin|spair|oracle`"));
                };
                set_engine(ln, e)?;
            }
            other => return Err(err(ln, format!("unknown keyword `{other}`"))),
        }
    }

    let body = match (property, predicate, patterns.is_empty()) {
        (Some(p), None, true) => p,
        (Some(_), _, _) => {
            return Err(err(
                0,
                "a spec with `property` cannot also have `predicate` or `pattern` lines",
            ))
        }
        (None, Some(predicate), false) => Body::Patterns {
            predicate,
            patterns,
        },
        (None, None, _) => return Err(err(0, "missing `predicate` line (or a `property` preset)")),
        (None, Some(_), true) => return Err(err(0, "at least one `pattern` line is required")),
    };
    Ok(SpecFile {
        name: name.ok_or_else(|| err(0, "missing `spec NAME` line"))?,
        model: model.ok_or_else(|| err(0, "missing `model NAME` line"))?,
        body,
        engine,
    })
}

fn emit_set(r: &SetRef) -> String {
    match r {
        SetRef::Named(n) => n.clone(),
        SetRef::Ids(ids) => ids.join(" "),
    }
}

fn emit_pairs(p: &PairSpec) -> String {
    match p {
        PairSpec::Distinct => "distinct".into(),
        PairSpec::Pairs(ps) => {
            let s: String = ps.iter().map(|(a, b)| format!("({a},{b})")).collect();
            format!("pairs {s}")
        }
        PairSpec::Square(r) => format!("square {}", emit_set(r)),
        PairSpec::NonsecretSquare(r) => format!("nonsecret-square {}", emit_set(r)),
    }
}

pub fn emit_spec(s: &SpecFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "spec {}\nmodel {}", s.name, s.model);
    match &s.body {
        Body::Patterns {
            predicate,
            patterns,
        } => {
            let _ = writeln!(out, "predicate dis {}", emit_pairs(predicate));
            for p in patterns {
                let q = match p.quantifier() {
                    Quantifier::ForAll => "forall",
                    Quantifier::Exists => "exists",
                };
                let k = if p.k_low() { "T" } else { "F" };
                let _ = writeln!(out, "pattern {q} {k} {}", p.k_high().as_str());
            }
        }
        Body::Property {
            preset,
            pairs,
            secret,
        } => {
            let args = match (pairs, secret) {
                (Some(p), _) => emit_pairs(p),
                (None, Some(SetRef::Named(n))) => format!("set {n}"),
                (None, Some(SetRef::Ids(ids))) => format!("secret {}", ids.join(" ")),
                (None, None) => String::new(),
            };
            let _ = writeln!(out, "property {preset} {args}");
        }
    }
    if let Some(e) = s.engine {
        let _ = writeln!(out, "engine {}", engine_name(e));
    }
    out
}

fn resolve_set(m: &ModelFile, r: &SetRef) -> Result<StateSet, ParseError> {
    match r {
        SetRef::Named(n) => match m.set(n) {
            Some(s) => Ok(s.clone()),
            // a single token that is not a set name may still be a state id
            None => m.states(&[n.as_str()]).map_err(|_| {
                err(
                    0,
                    format!("`{n}` is neither a set of model {} nor a state", m.name),
                )
            }),
        },
        SetRef::Ids(ids) => {
            let names: Vec<&str> = ids.iter().map(String::as_str).collect();
            m.states(&names).map_err(|e| err(0, e))
        }
    }
}

/// Parses the text after `predicate dis`, e.g. `square yellow`.
pub fn parse_pair_spec(text: &str) -> Result<PairSpec, ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    pair_spec(0, &toks)
}

pub fn resolve_tspec(m: &ModelFile, p: &PairSpec) -> Result<TSpec, ParseError> {
    let g = &m.automaton;
    let core = |e: epistemic_core::Error| err(0, e.to_string());
    match p {
        PairSpec::Distinct => Ok(TSpec::distinct(g)),
        PairSpec::Pairs(ps) => {
            let mut pairs: Vec<(StateId, StateId)> = Vec::new();
            for (a, b) in ps {
                let id = |n: &str| {
                    g.state_id(n)
                        .ok_or_else(|| err(0, format!("unknown state `{n}`")))
                };
                pairs.push((id(a)?, id(b)?));
            }
            TSpec::new(g, pairs).map_err(core)
        }
        PairSpec::Square(r) => TSpec::square(g, &resolve_set(m, r)?).map_err(core),
        PairSpec::NonsecretSquare(r) => {
            TSpec::nonsecret_square(g, &resolve_set(m, r)?).map_err(core)
        }
    }
}

/// Builds the verification task of `spec` over `model`.
pub fn resolve(spec: &SpecFile, model: &ModelFile) -> Result<VerificationTask, ParseError> {
    let core = |e: epistemic_core::Error| err(0, e.to_string());
    let (g, lo, hi) = (&model.automaton, &model.low, &model.high);
    match &spec.body {
        Body::Patterns {
            predicate,
            patterns,
        } => {
            let t = resolve_tspec(model, predicate)?;
            VerificationTask::new(
                g.clone(),
                lo.clone(),
                hi.clone(),
                KnowledgePredicate::Dis(t),
                patterns.clone(),
            )
            .map_err(core)
        }
        Body::Property {
            preset,
            pairs,
            secret,
        } => {
            let p = match (preset.as_str(), pairs, secret) {
                ("high-order-opacity", Some(p), _) => {
                    Preset::HighOrderOpacity(resolve_tspec(model, p)?)
                }
                ("high-order-detectability", Some(p), _) => {
                    Preset::HighOrderDetectability(resolve_tspec(model, p)?)
                }
                ("intrusion-undetectability", _, Some(s)) => {
                    Preset::IntrusionUndetectability(resolve_set(model, s)?)
                }
                ("epistemic-diagnosability", _, Some(s)) => {
                    Preset::EpistemicDiagnosability(resolve_set(model, s)?)
                }
                ("finite-epistemic-diagnosability", _, Some(s)) => {
                    Preset::FiniteEpistemicDiagnosability(resolve_set(model, s)?)
                }
                (other, _, _) => return Err(err(0, format!("bad arguments for preset `{other}`"))),
            };
            preset_task(p, g, lo, hi).map_err(core)
        }
    }
}

/// Everything loaded for one spec file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub spec: SpecFile,
    pub model: ModelFile,
    pub task: VerificationTask,
}

/// Finds a model by name: `<dir>/NAME.des` first, then the bundled fixtures.
pub fn find_model(dir: &Path, name: &str) -> anyhow::Result<ModelFile> {
    let path = dir.join(format!("{name}.des"));
    let (text, origin) = if path.exists() {
        (std::fs::read_to_string(&path)?, path.display().to_string())
    } else if let Some(t) = fixtures::model(name) {
        (t.to_string(), format!("bundled fixture {name}"))
    } else {
        anyhow::bail!(
            "model `{name}` not found ({} does not exist and no bundled fixture has that name)",
            path.display()
        );
    };
    parse_model(&text).map_err(|e| anyhow::anyhow!("{origin}: {e}"))
}

pub fn load_spec(path: &Path) -> anyhow::Result<Loaded> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let spec = parse_spec(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let model = find_model(dir, &spec.model)?;
    let task = resolve(&spec, &model).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    Ok(Loaded { spec, model, task })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> ModelFile {
        parse_model(fixtures::G1).unwrap()
    }

    #[test]
    fn preset_diagnosability() {
        let s =
            parse_spec("spec d\nmodel G1\nproperty epistemic-diagnosability secret 4\n").unwrap();
        let m = g1();
        let t = resolve(&s, &m).unwrap();
        let g = &m.automaton;
        let expected = TSpec::nonsecret_square(g, &m.states(&["4"]).unwrap()).unwrap();
        assert_eq!(t.predicate, KnowledgePredicate::Dis(expected));
        assert_eq!(
            t.patterns,
            [Pattern::new(Quantifier::ForAll, true, KHigh::Y).unwrap()]
        );
    }

    #[test]
    fn inadmissible_pattern_rejected() {
        let e = parse_spec("spec x\nmodel G1\npredicate dis distinct\npattern forall T N\n")
            .unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("inadmissible"), "{e}");
    }

    #[test]
    fn engine_on_pattern_line() {
        let s = parse_spec(
            "spec x\nmodel G1\npredicate dis distinct\npattern exists F U engine twin\n",
        )
        .unwrap();
        assert_eq!(s.engine, Some(EngineChoice::Twin));
        assert_eq!(
            s.body,
            Body::Patterns {
                predicate: PairSpec::Distinct,
                patterns: vec![Pattern::new(Quantifier::Exists, false, KHigh::U).unwrap()],
            }
        );
    }

    #[test]
    fn pairs_and_sets() {
        let m = parse_model(fixtures::G0).unwrap();
        let s =
            parse_spec("spec x\nmodel G0\npredicate dis pairs (0,2) (3,6)\npattern forall T U\n")
                .unwrap();
        let t = resolve(&s, &m).unwrap();
        assert_eq!(t.predicate.tspec().unwrap().len(), 2);
        let sq =
            parse_spec("spec x\nmodel G0\nproperty high-order-opacity square yellow\n").unwrap();
        let t = resolve(&sq, &m).unwrap();
        assert_eq!(t.predicate.tspec().unwrap().len(), 16);
        let ids =
            parse_spec("spec x\nmodel G0\npredicate dis square 0 2\npattern forall T U\n").unwrap();
        assert_eq!(
            resolve(&ids, &m).unwrap().predicate.tspec().unwrap().len(),
            4
        );
    }

    #[test]
    fn errors() {
        assert!(parse_spec("spec x\nmodel G1\nproperty no-such-thing\n")
            .unwrap_err()
            .message
            .contains("unknown preset"));
        assert_eq!(
            parse_spec("spec x\nmodel G1\npredicate dis distinct\npattern forall T\n")
                .unwrap_err()
                .line,
            4
        );
        assert!(parse_spec("spec x\nmodel G1\npredicate dis distinct\n").is_err());
        assert!(
            parse_spec("spec x\nmodel G1\npredicate dis pairs (0,\npattern forall T U\n").is_err()
        );
        let s =
            parse_spec("spec x\nmodel G1\nproperty epistemic-diagnosability secret 42\n").unwrap();
        assert!(resolve(&s, &g1()).unwrap_err().message.contains("42"));
    }

    #[test]
    fn round_trip() {
        for text in [
            "spec a\nmodel G1\npredicate dis pairs (0,1)(2,3)\npattern forall T U\npattern exists F N\nengine double\n",
            "spec b\nmodel G0\nproperty high-order-opacity square yellow\n",
            "spec c\nmodel G1\nproperty intrusion-undetectability secret 4 5\n",
            "spec d\nmodel G1\nproperty finite-epistemic-diagnosability set secret\n",
        ] {
            let s = parse_spec(text).unwrap();
            assert_eq!(emit_spec(&s), text);
            assert_eq!(parse_spec(&emit_spec(&s)).unwrap(), s);
        }
    }
}
