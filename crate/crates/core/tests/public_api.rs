use epistemic_core::{
    preset_task, verify, Automaton, EngineChoice, KnowledgePredicate, ObservationMap, Pattern,
    Preset, StateSet, TSpec, VerificationTask,
};

fn g1() -> (Automaton, ObservationMap, ObservationMap) {
    let mut b = Automaton::builder()
        .states(["0", "1", "2", "3", "4", "5", "6", "7"])
        .unwrap()
        .events(["a", "b", "c", "d"])
        .unwrap()
        .initial("0")
        .unwrap();
    for (x, e, y) in [
        ("0", "c", "2"),
        ("2", "b", "4"),
        ("4", "d", "6"),
        ("0", "a", "1"),
        ("1", "b", "3"),
        ("3", "b", "5"),
        ("5", "a", "7"),
        ("7", "d", "7"),
        ("6", "d", "4"),
    ] {
        b = b.transition(x, e, y).unwrap();
    }
    let g = b.build().unwrap();
    let lo = ObservationMap::natural(&g, ["b", "d"]).unwrap();
    let hi = ObservationMap::natural(&g, ["a", "b"]).unwrap();
    (g, lo, hi)
}

#[test]
fn opacity_holds_on_every_engine() {
    let (g, lo, hi) = g1();
    let p = Pattern::ADMISSIBLE[0];
    let t = VerificationTask::new(
        g.clone(),
        lo,
        hi,
        KnowledgePredicate::Dis(TSpec::distinct(&g)),
        vec![p],
    )
    .unwrap();
    for e in [
        EngineChoice::Auto,
        EngineChoice::Double,
        EngineChoice::Spair,
        EngineChoice::Oracle,
    ] {
        assert!(verify(&t, e).unwrap().holds, "{e:?}");
    }
}

#[test]
fn diagnosability_witness_through_public_api() {
    let (g, lo, hi) = g1();
    let secret: StateSet = [g.state_id("4").unwrap()].into_iter().collect();
    let t = preset_task(
        Preset::EpistemicDiagnosability(secret.clone()),
        &g,
        &lo,
        &hi,
    )
    .unwrap();
    let v = verify(&t, EngineChoice::Auto).unwrap();
    assert!(!v.holds);
    let w = v.witness.unwrap();
    assert_eq!(epistemic_core::verify::format_events(&g, &w.system), "cbdd");
    assert_eq!(
        epistemic_core::verify::format_events(&g, &w.confused.unwrap()),
        "cb"
    );

    let f = preset_task(Preset::FiniteEpistemicDiagnosability(secret), &g, &lo, &hi).unwrap();
    assert!(verify(&f, EngineChoice::Auto).unwrap().holds);
}
