use std::fmt::Write;

use crate::netgraph::WeightedDigraph;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Graphviz DOT text: vertices in declaration order, then edges by source
/// and target order, each labelled with its weight.
pub fn emit_dot(g: &WeightedDigraph) -> String {
    let mut s = String::from("digraph G {\n");
    for label in g.labels() {
        writeln!(s, "  {};", quote(label)).unwrap();
    }
    for (a, b, w) in g.edges() {
        writeln!(
            s,
            "  {} -> {} [label={}];",
            quote(g.label(a)),
            quote(g.label(b)),
            quote(&w.to_string())
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}
