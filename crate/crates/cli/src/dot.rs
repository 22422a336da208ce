//! GraphViz output.

use std::fmt::Write as _;

use wautom_core::semiring::is_zero;

use crate::model::Model;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Nodes in state order, then edges by source, symbol and target.
pub fn export_dot(model: &Model) -> String {
    let mut out = String::new();
    match model {
        Model::Wa(aut) => {
            let sr = aut.semiring();
            out.push_str("digraph wa {\n  rankdir=LR;\n");
            for (x, name) in aut.states().iter().enumerate() {
                // two-line label: name, then termination weight
                let w = sr.format(&aut.termination()[x]);
                let _ = writeln!(out, "  {} [label=\"{}\\n{}\"];", quote(name), escape(name), escape(&w));
            }
            for x in 0..aut.len() {
                for (a, sym) in aut.alphabet().iter().enumerate() {
                    for y in 0..aut.len() {
                        let w = aut.transition(x, a, y);
                        if !is_zero(sr.as_ref(), w) {
                            let label = format!("{sym}, {}", sr.format(w));
                            let (xs, ys) = (&aut.states()[x], &aut.states()[y]);
                            let _ = writeln!(out, "  {} -> {} [label={}];", quote(xs), quote(ys), quote(&label));
                        }
                    }
                }
            }
        }
        Model::Cts(m) => {
            out.push_str("digraph cts {\n  rankdir=LR;\n");
            for name in &m.states {
                let _ = writeln!(out, "  {};", quote(name));
            }
            for e in &m.edges {
                let label = format!("{}, {}", m.alphabet[e.symbol], e.guard);
                let _ = writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quote(&m.states[e.from]),
                    quote(&m.states[e.to]),
                    quote(&label)
                );
            }
        }
    }
    out.push_str("}\n");
    out
}
