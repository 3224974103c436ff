//! Graphviz rendering of the plant and the estimators.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::automaton::Automaton;
use crate::estimators::{
    Classification, DoubleEstimator, Recognizer, StatePairEstimator, TwinEstimator, TwinEvent,
};
use crate::knowledge::TSpec;
use crate::observation::ObservationMap;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

/// Node label and extra attributes.
struct Node {
    label: String,
    attrs: &'static str,
}

fn render(name: &str, nodes: &[Node], edges: &[(usize, String, usize)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
    out.push_str("  rankdir=LR;\n  node [shape=box];\n  init [shape=point];\n");
    for (i, n) in nodes.iter().enumerate() {
        let _ = write!(out, "  n{i} [label=\"{}\"", escape(&n.label));
        if !n.attrs.is_empty() {
            let _ = write!(out, ", {}", n.attrs);
        }
        out.push_str("];\n");
    }
    if !nodes.is_empty() {
        out.push_str("  init -> n0;\n");
    }
    for (i, l, j) in edges {
        let _ = writeln!(out, "  n{i} -> n{j} [label=\"{}\"];", escape(l));
    }
    out.push_str("}\n");
    out
}

fn set_label<'a>(items: impl Iterator<Item = &'a str>) -> String {
    let v: Vec<&str> = items.collect();
    format!("{{{}}}", v.join(","))
}

pub fn automaton_to_dot(aut: &Automaton) -> String {
    let nodes: Vec<Node> = aut
        .states()
        .map(|x| Node {
            label: String::from(aut.state_name(x)),
            attrs: "",
        })
        .collect();
    let edges: Vec<_> = aut
        .transitions()
        .map(|(x, e, y)| (x.index(), String::from(aut.event_name(e)), y.index()))
        .collect();
    // the initial state is not necessarily index 0 here
    let mut out = render("G", &nodes, &edges);
    let fix = format!("init -> n{};", aut.initial().index());
    out = out.replacen("init -> n0;", &fix, 1);
    out
}

fn rec_label(plant: &Automaton, rec: &Recognizer, i: usize) -> String {
    let q = rec.state(i);
    format!(
        "({},{})",
        plant.state_name(q.state),
        set_label(q.estimate.iter().map(|x| plant.state_name(*x)))
    )
}

/// Recognizer with known states (`Q_T`) filled.
pub fn recognizer_to_dot(
    plant: &Automaton,
    rec: &Recognizer,
    cls: Option<&Classification>,
) -> String {
    let nodes: Vec<Node> = (0..rec.len())
        .map(|i| Node {
            label: rec_label(plant, rec, i),
            attrs: match cls {
                Some(c) if c.is_known(i) => "style=filled, fillcolor=lightgray",
                _ => "",
            },
        })
        .collect();
    let edges: Vec<_> = rec
        .graph
        .all_edges()
        .map(|(i, e, j)| (i, String::from(plant.event_name(*e)), j))
        .collect();
    render("recognizer", &nodes, &edges)
}

pub fn double_to_dot(
    plant: &Automaton,
    high: &ObservationMap,
    rec: &Recognizer,
    dbl: &DoubleEstimator,
) -> String {
    let nodes: Vec<Node> = (0..dbl.len())
        .map(|i| Node {
            label: {
                let parts: Vec<String> = dbl
                    .state(i)
                    .iter()
                    .map(|&r| rec_label(plant, rec, r))
                    .collect();
                format!("{{{}}}", parts.join(","))
            },
            attrs: "",
        })
        .collect();
    let edges: Vec<_> = dbl
        .graph
        .all_edges()
        .map(|(i, o, j)| (i, String::from(high.symbol_name(*o)), j))
        .collect();
    render("double", &nodes, &edges)
}

fn twin_event_label(plant: &Automaton, ev: &TwinEvent) -> String {
    let name = |e: Option<crate::EventId>| e.map_or("ε", |e| plant.event_name(e));
    format!("({},{})", name(ev.first()), name(ev.second()))
}

/// Twin estimator; states with a known first and unknown second component
/// are drawn red.
pub fn twin_to_dot(
    plant: &Automaton,
    rec: &Recognizer,
    cls: Option<&Classification>,
    twin: &TwinEstimator,
) -> String {
    let nodes: Vec<Node> = (0..twin.len())
        .map(|i| {
            let (a, b) = (twin.theta1(i), twin.theta2(i));
            Node {
                label: format!(
                    "{} | {}",
                    rec_label(plant, rec, a),
                    rec_label(plant, rec, b)
                ),
                attrs: match cls {
                    Some(c) if c.is_known(a) && !c.is_known(b) => "color=red",
                    _ => "",
                },
            }
        })
        .collect();
    let edges: Vec<_> = twin
        .graph
        .all_edges()
        .map(|(i, ev, j)| (i, twin_event_label(plant, ev), j))
        .collect();
    render("twin", &nodes, &edges)
}

/// State-pair estimator; states of `Q_P^Y` are filled when a pair
/// specification is given.
pub fn state_pair_to_dot(
    plant: &Automaton,
    high: &ObservationMap,
    spe: &StatePairEstimator,
    tspec: Option<&TSpec>,
) -> String {
    let n = |x| plant.state_name(x);
    let nodes: Vec<Node> = (0..spe.len())
        .map(|i| Node {
            label: {
                let parts: Vec<String> = spe
                    .state(i)
                    .iter()
                    .map(|t| format!("({},({},{}))", n(t.actual), n(t.pair.0), n(t.pair.1)))
                    .collect();
                format!("{{{}}}", parts.join(","))
            },
            attrs: match tspec {
                Some(t) if spe.is_high_known(i, t) => "style=filled, fillcolor=lightgray",
                _ => "",
            },
        })
        .collect();
    let edges: Vec<_> = spe
        .graph
        .all_edges()
        .map(|(i, o, j)| (i, String::from(high.symbol_name(*o)), j))
        .collect();
    render("state_pair", &nodes, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{build_recognizer, build_twin};
    use crate::fixtures::g1;

    #[test]
    fn escapes_quotes() {
        assert_eq!(escape("a\"b\\"), "a\\\"b\\\\");
    }

    #[test]
    fn renders_g1_recognizer_and_twin() {
        let (g, lo, hi) = g1();
        let rec = build_recognizer(&g, &lo);
        let dot = recognizer_to_dot(&g, &rec, None);
        assert!(dot.starts_with("digraph \"recognizer\""));
        assert!(dot.contains("label=\"(0,{0,1,2})\""));
        assert_eq!(dot.matches(" -> ").count(), rec.graph.num_edges() + 1);
        let twin = build_twin(&rec, &hi);
        assert!(twin_to_dot(&g, &rec, None, &twin).contains("(ε,c)"));
        assert!(automaton_to_dot(&g).contains("init -> n0;"));
    }
}
