use std::fmt::Write as _;

use postman_core::format::VertexLabels;
use postman_core::qubo::StepMode;
use postman_core::{Graph, RouteSolution};

const COLORS: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graph in DOT form: grey edges with weights, then one coloured arrow per
/// route step labelled `postman:step`.
pub fn render(g: &Graph, labels: &VertexLabels, route: Option<&RouteSolution>) -> String {
    let name = |v: usize| quote(&labels.label(v).to_string());
    let mut s = String::from("digraph route {\n  node [shape=circle];\n");
    for v in 0..g.num_vertices() {
        writeln!(s, "  {};", name(v)).unwrap();
    }
    for e in g.undirected_edges() {
        let w = if e.w_ab == e.w_ba { e.w_ab.to_string() } else { format!("{}/{}", e.w_ab, e.w_ba) };
        writeln!(s, "  {} -> {} [dir=none, color=gray, label={}];", name(e.a), name(e.b), quote(&w)).unwrap();
    }
    for e in g.directed_edges() {
        writeln!(s, "  {} -> {} [color=gray, label={}];", name(e.from), name(e.to), quote(&e.w.to_string())).unwrap();
    }
    if let Some(route) = route {
        for (p, walk) in route.walks.iter().enumerate() {
            let color = COLORS[p % COLORS.len()];
            for (i, step) in walk.iter().enumerate() {
                let style = if step.mode == StepMode::Traverse { "dashed" } else { "bold" };
                writeln!(
                    s,
                    "  {} -> {} [color={color}, style={style}, fontcolor={color}, label=\"{p}:{i}\"];",
                    name(step.from),
                    name(step.to)
                )
                .unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}
