//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use epistemic::crosscheck::{self, Config, Report};
use epistemic::fixtures;
use epistemic::invariants::{self, Bounds};
use epistemic::model_file::{parse_model, ModelFile};
use epistemic::spec_file::{parse_spec, resolve};
use epistemic::verdict_json::VerdictJson;
use epistemic_core::{
    build_double, build_recognizer, build_state_pair, build_twin, classify, preset_task, verify,
    EngineChoice, KnowledgePredicate, Preset, RecState, Recognizer, StateSet, TSpec, Triple,
    TwinEvent, VerificationTask,
};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn g1() -> ModelFile {
    parse_model(fixtures::G1).expect("G1 parses")
}

fn set(m: &ModelFile, names: &[&str]) -> StateSet {
    m.states(names).expect("known states")
}

fn rs(m: &ModelFile, x: &str, est: &[&str]) -> RecState {
    RecState {
        state: m.automaton.state_id(x).expect("known state"),
        estimate: set(m, est),
    }
}

fn rec_set(rec: &Recognizer, idx: impl IntoIterator<Item = usize>) -> BTreeSet<RecState> {
    idx.into_iter().map(|i| rec.state(i).clone()).collect()
}

fn spec_task(m: &ModelFile, text: &str) -> VerificationTask {
    resolve(&parse_spec(text).expect("spec parses"), m).expect("spec resolves")
}

fn criterion_1() -> Check {
    let m = g1();
    let (g, lo, hi) = (&m.automaton, &m.low, &m.high);
    let rec = build_recognizer(g, lo);
    let a012 = ["0", "1", "2"];
    let expected: BTreeSet<RecState> = [
        rs(&m, "0", &a012),
        rs(&m, "1", &a012),
        rs(&m, "2", &a012),
        rs(&m, "3", &["3", "4"]),
        rs(&m, "4", &["3", "4"]),
        rs(&m, "4", &["4"]),
        rs(&m, "5", &["5", "7"]),
        rs(&m, "7", &["5", "7"]),
        rs(&m, "6", &["6"]),
        rs(&m, "7", &["7"]),
    ]
    .into();
    ensure!(rec.len() == 10, "recognizer has {} states", rec.len());
    ensure!(
        rec_set(&rec, 0..rec.len()) == expected,
        "recognizer states differ"
    );

    let pred = KnowledgePredicate::Dis(TSpec::distinct(g));
    let cls = classify(&rec, &pred).map_err(|e| e.to_string())?;
    let q_t = rec_set(&rec, cls.known());
    let want: BTreeSet<RecState> = [
        rs(&m, "4", &["4"]),
        rs(&m, "6", &["6"]),
        rs(&m, "7", &["7"]),
    ]
    .into();
    ensure!(q_t == want, "Q_T = {q_t:?}");

    let dbl = build_double(&rec, hi);
    let got: BTreeSet<BTreeSet<RecState>> = (0..dbl.len())
        .map(|i| rec_set(&rec, dbl.state(i).iter().copied()))
        .collect();
    let want: BTreeSet<BTreeSet<RecState>> = [
        vec![rs(&m, "0", &a012), rs(&m, "2", &a012)],
        vec![rs(&m, "1", &a012)],
        vec![
            rs(&m, "4", &["3", "4"]),
            rs(&m, "4", &["4"]),
            rs(&m, "6", &["6"]),
        ],
        vec![rs(&m, "3", &["3", "4"])],
        vec![rs(&m, "5", &["5", "7"])],
        vec![rs(&m, "7", &["5", "7"]), rs(&m, "7", &["7"])],
    ]
    .into_iter()
    .map(BTreeSet::from_iter)
    .collect();
    ensure!(
        dbl.len() == 6 && got == want,
        "double estimator states differ: {got:?}"
    );

    let task = spec_task(
        &m,
        "spec o\nmodel G1\npredicate dis distinct\npattern forall T U\n",
    );
    let v = verify(&task, EngineChoice::Auto).map_err(|e| e.to_string())?;
    ensure!(v.holds, "opacity verdict is violated");
    Ok(())
}

fn criterion_2() -> Check {
    let m = g1();
    let task = spec_task(
        &m,
        "spec d\nmodel G1\nproperty epistemic-diagnosability secret 4\n",
    );
    let v = verify(&task, EngineChoice::Auto).map_err(|e| e.to_string())?;
    ensure!(!v.holds, "diagnosability holds");
    let j = VerdictJson::new("d", &task, &v);
    let w = j.witness.ok_or("no witness")?;
    ensure!(
        w.system_string == "cbdd",
        "systemString {}",
        w.system_string
    );
    ensure!(
        w.confused_string.as_deref() == Some("cb"),
        "confusedString {:?}",
        w.confused_string
    );

    let rec = build_recognizer(&m.automaton, &m.low);
    let twin = build_twin(&rec, &m.high);
    let i = rec
        .graph
        .find(&rs(&m, "4", &["4"]))
        .ok_or("(4,{4}) missing")?;
    let k = rec
        .graph
        .find(&rs(&m, "4", &["3", "4"]))
        .ok_or("(4,{3,4}) missing")?;
    ensure!(
        twin.graph.find(&(i, k)).is_some(),
        "red twin state not reachable"
    );
    Ok(())
}

fn criterion_3() -> Check {
    let m = g1();
    let g = &m.automaton;
    let spe = build_state_pair(g, &m.low, &m.high);
    ensure!(
        spe.len() == 6,
        "state-pair estimator has {} states",
        spe.len()
    );
    let x = |n: &str| g.state_id(n).expect("known state");
    let block = |actual: &[&str], e: &[&str]| -> BTreeSet<Triple> {
        actual
            .iter()
            .flat_map(|a| {
                e.iter()
                    .flat_map(move |p| e.iter().map(move |q| Triple::new(x(a), x(p), x(q))))
            })
            .collect()
    };
    let (a, b, c) = (["0", "1", "2"], ["3", "4"], ["5", "7"]);
    let mut with_six = block(&["4"], &b);
    with_six.insert(Triple::new(x("6"), x("6"), x("6")));
    let want: BTreeSet<BTreeSet<Triple>> = [
        block(&["0", "2"], &a),
        block(&["1"], &a),
        block(&["3"], &b),
        with_six,
        block(&["5"], &c),
        block(&["7"], &c),
    ]
    .into();
    let got: BTreeSet<BTreeSet<Triple>> = (0..spe.len())
        .map(|i| spe.state(i).iter().copied().collect())
        .collect();
    ensure!(got == want, "state-pair states differ");
    ensure!(
        spe.high_known(&TSpec::distinct(g)).is_empty(),
        "Q_P^Y is not empty"
    );

    let task = spec_task(
        &m,
        "spec o\nmodel G1\npredicate dis distinct\npattern forall T U\n",
    );
    let sp = verify(&task, EngineChoice::Spair).map_err(|e| e.to_string())?;
    let db = verify(&task, EngineChoice::Double).map_err(|e| e.to_string())?;
    ensure!(
        sp.holds && sp.holds == db.holds,
        "spair {} double {}",
        sp.holds,
        db.holds
    );
    Ok(())
}

fn criterion_4() -> Check {
    let m = parse_model(fixtures::G0).map_err(|e| e.to_string())?;
    let task = spec_task(
        &m,
        "spec g0\nmodel G0\nproperty high-order-opacity square yellow\n",
    );
    for e in [
        EngineChoice::Auto,
        EngineChoice::Double,
        EngineChoice::Oracle,
    ] {
        let v = verify(&task, e).map_err(|e| e.to_string())?;
        ensure!(!v.holds, "{e:?}: opacity holds on G0");
        let w = VerdictJson::new("g0", &task, &v)
            .witness
            .ok_or("no witness")?;
        ensure!(
            w.system_string == "g" && w.high_obs == "g",
            "{e:?}: witness {w:?}"
        );
    }
    Ok(())
}

fn criterion_5(r: &Report) -> Check {
    ensure!(r.models == 500, "{} models", r.models);
    ensure!(
        r.auto_vs_oracle == 500 * 16,
        "{} comparisons",
        r.auto_vs_oracle
    );
    let n = r.count("auto-vs-oracle");
    ensure!(
        n == 0,
        "{n} disagreements, first {:?}",
        r.disagreements.first()
    );
    Ok(())
}

fn criterion_6(r: &Report) -> Check {
    ensure!(
        r.twin_vs_double == 500 * 8 && r.spair_vs_double == 500 * 4,
        "comparison counts"
    );
    let n = r.count("twin-vs-double") + r.count("spair-vs-double");
    ensure!(
        n == 0,
        "{n} disagreements, first {:?}",
        r.disagreements.first()
    );
    Ok(())
}

fn criterion_7() -> Check {
    let r = invariants::run(7, 100, 6, 4, Bounds::default());
    ensure!(r.models == 100, "{} models", r.models);
    ensure!(
        r.violations.is_empty(),
        "{} violations, first {}",
        r.violations.len(),
        r.violations[0]
    );
    Ok(())
}

fn criterion_8(r: &Report) -> Check {
    ensure!(r.count("implication") == 0, "implication fails");
    ensure!(
        r.count("finite-vs-oracle") == 0,
        "finite diagnosability disagrees with oracle"
    );
    ensure!(r.implication > 0, "no instance exercised the implication");

    // G1: the only confusion cycle is silent for the high observer
    let m = g1();
    let secret = set(&m, &["4"]);
    let t = preset_task(
        Preset::FiniteEpistemicDiagnosability(secret),
        &m.automaton,
        &m.low,
        &m.high,
    )
    .map_err(|e| e.to_string())?;
    for e in [EngineChoice::Auto, EngineChoice::Oracle] {
        let v = verify(&t, e).map_err(|e| e.to_string())?;
        ensure!(
            v.holds && v.witness.is_none(),
            "{e:?} reports a refuting cycle on G1"
        );
    }
    let rec = build_recognizer(&m.automaton, &m.low);
    let twin = build_twin(&rec, &m.high);
    let red = twin
        .graph
        .find(&(
            rec.graph.find(&rs(&m, "4", &["4"])).ok_or("missing")?,
            rec.graph.find(&rs(&m, "4", &["3", "4"])).ok_or("missing")?,
        ))
        .ok_or("red state missing")?;
    let d = TwinEvent::First(m.automaton.event_id("d").ok_or("no event d")?);
    let back = twin
        .graph
        .step(red, &d)
        .and_then(|j| twin.graph.step(j, &d));
    ensure!(
        back == Some(red) && !d.is_observable(),
        "silent cycle at the red state not found"
    );
    Ok(())
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report =
        |n: usize, limit: Option<Duration>, before: Duration, f: &dyn Fn() -> Check| {
            let start = Instant::now() - before;
            let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
                Err(p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into()))
            });
            let took = start.elapsed();
            let out = match (out, limit) {
                (Ok(()), Some(l)) if took > l => Err(format!("took {took:?}, limit {l:?}")),
                (o, _) => o,
            };
            match out {
                Ok(()) => println!("criterion {n}: PASS ({:.1} ms)", took.as_secs_f64() * 1e3),
                Err(e) => {
                    failed += 1;
                    println!("criterion {n}: FAIL: {e}");
                }
            }
        };
    let second = Some(Duration::from_secs(1));
    report(1, second, Duration::ZERO, &criterion_1);
    report(2, second, Duration::ZERO, &criterion_2);
    report(3, second, Duration::ZERO, &criterion_3);
    report(4, second, Duration::ZERO, &criterion_4);

    let start = Instant::now();
    let suite = crosscheck::run(&Config::default());
    let suite_time = start.elapsed();
    let five_min = Duration::from_secs(300);
    report(5, None, suite_time, &|| {
        ensure!(suite_time < five_min, "suite took {suite_time:?}");
        criterion_5(&suite)
    });
    report(6, None, Duration::ZERO, &|| criterion_6(&suite));
    report(7, None, Duration::ZERO, &criterion_7);
    report(8, None, Duration::ZERO, &|| criterion_8(&suite));

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
