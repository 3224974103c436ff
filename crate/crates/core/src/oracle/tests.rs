use alloc::collections::BTreeMap;
use alloc::vec;

use proptest::prelude::*;

use super::*;
use crate::estimate::estimate_of;
use crate::estimators::{build_double, build_recognizer, classify};
use crate::fixtures::{arb_model, g0, g1, obs, set};
use crate::knowledge::TSpec;

fn distinct(g: &Automaton) -> KnowledgePredicate {
    KnowledgePredicate::Dis(TSpec::distinct(g))
}

fn constant(g: &Automaton, v: bool) -> KnowledgePredicate {
    if v {
        KnowledgePredicate::Dis(TSpec::empty(g))
    } else {
        let all: StateSet = g.states().collect();
        KnowledgePredicate::Dis(TSpec::square(g, &all).unwrap())
    }
}

fn pat(q: Quantifier, k: bool, h: KHigh) -> Pattern {
    Pattern::new(q, k, h).unwrap()
}

#[test]
fn knowledge_examples() {
    let (g, lo, _) = g1();
    let p = distinct(&g);
    assert_eq!(
        oracle_estimate(&g, &lo, &[]).unwrap(),
        set(&g, &["0", "1", "2"])
    );
    assert_eq!(oracle_kw(&g, &lo, &p, &[]), Ok(false));
    assert_eq!(oracle_kw(&g, &lo, &p, &obs(&lo, "bd")), Ok(true));
    assert_eq!(
        oracle_kw(&g, &lo, &p, &obs(&lo, "dd")),
        Err(Error::InfeasibleObservation)
    );
    for a in ["", "b", "bd", "bb"] {
        assert_eq!(
            oracle_kw(&g, &lo, &constant(&g, true), &obs(&lo, a)),
            Ok(true)
        );
    }
}

#[test]
fn high_level_examples() {
    let (g, lo, hi) = g1();
    let p = distinct(&g);
    assert_eq!(
        oracle_hat_kw(&g, &lo, &hi, &p, &obs(&hi, "b")),
        Ok(KHigh::U)
    );
    assert_eq!(
        oracle_hat_kw(&g, &lo, &hi, &p, &obs(&hi, "a")),
        Ok(KHigh::N)
    );
    assert_eq!(
        oracle_hat_kw(&g, &lo, &hi, &p, &obs(&hi, "ba")),
        Err(Error::InfeasibleObservation)
    );
    for b in ["", "a", "b", "abba"] {
        assert_eq!(
            oracle_hat_kw(&g, &lo, &hi, &constant(&g, true), &obs(&hi, b)),
            Ok(KHigh::Y)
        );
    }
    let configs = configs_for_high(&g, &lo, &hi, &obs(&hi, "b")).unwrap();
    assert_eq!(configs.len(), 3);
}

#[test]
fn pattern_examples() {
    let (g, lo, hi) = g1();
    let opaque = oracle_pattern(
        &g,
        &lo,
        &hi,
        &distinct(&g),
        pat(Quantifier::ForAll, true, KHigh::U),
    )
    .unwrap();
    assert!(opaque.holds);
    assert_eq!(opaque.deciding, None);

    let (r, rlo, rhi) = g0();
    let yellow = set(&r, &["0", "2", "3", "6"]);
    let pred = KnowledgePredicate::Dis(TSpec::square(&r, &yellow).unwrap());
    let out = oracle_pattern(
        &r,
        &rlo,
        &rhi,
        &pred,
        pat(Quantifier::ForAll, true, KHigh::U),
    )
    .unwrap();
    assert!(!out.holds);
    assert_eq!(out.deciding, Some(obs(&rhi, "g")));

    for m in [g1(), g0()] {
        let f = constant(&m.0, false);
        let out = oracle_pattern(
            &m.0,
            &m.1,
            &m.2,
            &f,
            pat(Quantifier::Exists, true, KHigh::Y),
        )
        .unwrap();
        assert!(!out.holds);
    }
}

#[test]
fn table_predicate_is_consulted() {
    let (g, lo, hi) = g1();
    let mut table = BTreeMap::new();
    for a in ["", "b", "bb", "bd", "bdd", "bbd"] {
        let e = oracle_estimate(&g, &lo, &obs(&lo, a)).unwrap();
        table.insert(e.clone(), e.len() == 1);
    }
    let t = KnowledgePredicate::Table(table);
    assert_eq!(
        oracle_hat_kw(&g, &lo, &hi, &t, &obs(&hi, "b")),
        Ok(KHigh::U)
    );
}

#[test]
fn finite_diag_on_g1_holds() {
    let (g, lo, hi) = g1();
    let out = oracle_finite_diag(&g, &lo, &hi, &set(&g, &["4"])).unwrap();
    assert!(out.holds);
    assert!(out.lasso.is_none());
}

#[test]
fn finite_diag_needs_live_plant() {
    let g = Automaton::builder()
        .states(["0", "1"])
        .unwrap()
        .events(["a"])
        .unwrap()
        .initial("0")
        .unwrap()
        .transition("0", "a", "1")
        .unwrap()
        .build()
        .unwrap();
    let h = ObservationMap::full(&g);
    assert!(matches!(
        oracle_finite_diag(&g, &h, &h, &set(&g, &["1"])),
        Err(Error::NotLive(_))
    ));
}

/// All words of length at most `n` over the map's symbols.
fn words(h: &ObservationMap, n: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut frontier = out.clone();
    for _ in 0..n {
        let next: Vec<Vec<Symbol>> = frontier
            .iter()
            .flat_map(|w: &Vec<Symbol>| {
                h.symbols().map(move |o| {
                    let mut v = w.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kw_matches_estimate((g, lo, _) in arb_model(6, 3)) {
        let p = distinct(&g);
        for a in words(&lo, 5) {
            let e = estimate_of(&g, &lo, &a).unwrap();
            prop_assert_eq!(oracle_estimate(&g, &lo, &a).unwrap(), e.clone());
            if e.is_empty() {
                prop_assert_eq!(oracle_kw(&g, &lo, &p, &a), Err(Error::InfeasibleObservation));
            } else {
                prop_assert_eq!(oracle_kw(&g, &lo, &p, &a), p.eval(&e));
            }
        }
    }

    #[test]
    fn hat_kw_matches_double_classification((g, lo, hi) in arb_model(6, 3)) {
        let p = distinct(&g);
        let rec = build_recognizer(&g, &lo);
        let cls = classify(&rec, &p).unwrap();
        let dbl = build_double(&rec, &hi);
        for b in words(&hi, 4) {
            let got = oracle_hat_kw(&g, &lo, &hi, &p, &b);
            match dbl.run(&b) {
                None => prop_assert_eq!(got, Err(Error::InfeasibleObservation)),
                Some(i) => {
                    let q = dbl.state(i);
                    let t = q.iter().any(|&r| cls.is_known(r));
                    let f = q.iter().any(|&r| !cls.is_known(r));
                    prop_assert_eq!(got, Ok(KHigh::of(t, f)));
                }
            }
        }
    }
}
