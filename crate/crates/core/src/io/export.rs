//! Graph exports: Graphviz `dot` and a plain TikZ picture. Output depends
//! only on the diagram structure, so equal diagrams export identically.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use crate::diagram::{Diagram, NodeKind, Port};
use crate::normalform::node_layers;
use crate::semantics::format_complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    TikzText,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "tikz-text" => Ok(ExportFormat::TikzText),
            other => Err(format!(
                "unknown export format {other:?} (expected dot or tikz-text)"
            )),
        }
    }
}

fn name(p: Port) -> String {
    match p {
        Port::Input(i) => format!("in{i}"),
        Port::Output(j) => format!("out{j}"),
        Port::Node(id, _) => format!("n{id}"),
    }
}

fn port_label(p: Port) -> String {
    match p {
        Port::Node(_, k) => k.to_string(),
        _ => String::new(),
    }
}

fn phase_label(kind: NodeKind) -> String {
    match kind {
        NodeKind::Z(a) => format_complex(a, 3),
        NodeKind::H => "H".into(),
        NodeKind::Triangle => "T".into(),
        NodeKind::TriangleInv => "T-1".into(),
    }
}

pub fn export(d: &Diagram, format: ExportFormat) -> String {
    let d = d.normalized_ids();
    match format {
        ExportFormat::Dot => to_dot(&d),
        ExportFormat::TikzText => to_tikz(&d),
    }
}

fn to_dot(d: &Diagram) -> String {
    let mut s = String::from("graph zxel {\n  rankdir=LR;\n");
    for i in 0..d.n_inputs() {
        writeln!(s, "  in{i} [shape=point, xlabel=\"in{i}\"];").unwrap();
    }
    for j in 0..d.n_outputs() {
        writeln!(s, "  out{j} [shape=point, xlabel=\"out{j}\"];").unwrap();
    }
    for (id, node) in d.nodes() {
        let attrs = match node.kind {
            NodeKind::Z(_) => format!(
                "shape=circle, style=filled, fillcolor=\"#99dd99\", label=\"{}\"",
                phase_label(node.kind)
            ),
            NodeKind::H => "shape=square, style=filled, fillcolor=\"#eeee66\", label=\"H\"".into(),
            NodeKind::Triangle => "shape=triangle, orientation=270, label=\"\"".into(),
            NodeKind::TriangleInv => "shape=triangle, orientation=90, label=\"\"".into(),
        };
        writeln!(s, "  n{id} [{attrs}];").unwrap();
    }
    for (a, b) in d.edges() {
        writeln!(
            s,
            "  {} -- {} [taillabel=\"{}\", headlabel=\"{}\"];",
            name(a),
            name(b),
            port_label(a),
            port_label(b)
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

fn to_tikz(d: &Diagram) -> String {
    let layers = node_layers(d);
    let depth = layers.iter().map(|(_, l)| l + 1).max().unwrap_or(0);
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut s = format!(
        "% zxel diagram with {} inputs and {} outputs\n\\begin{{tikzpicture}}\n",
        d.n_inputs(),
        d.n_outputs()
    );
    for i in 0..d.n_inputs() {
        writeln!(s, "  \\node[boundary] (in{i}) at (0,{}) {{}};", -(i as i64)).unwrap();
    }
    for (id, l) in &layers {
        let row = rows.entry(*l).or_insert(0);
        let kind = d.node(*id).expect("layered node exists").kind;
        let (style, label) = match kind {
            NodeKind::Z(_) => ("zspider", format!("${}$", phase_label(kind))),
            NodeKind::H => ("hbox", String::new()),
            NodeKind::Triangle => ("triangle", String::new()),
            NodeKind::TriangleInv => ("triangleinv", String::new()),
        };
        writeln!(
            s,
            "  \\node[{style}] (n{id}) at ({},{}) {{{label}}};",
            l + 1,
            -(*row as i64)
        )
        .unwrap();
        *row += 1;
    }
    for j in 0..d.n_outputs() {
        writeln!(
            s,
            "  \\node[boundary] (out{j}) at ({},{}) {{}};",
            depth + 1,
            -(j as i64)
        )
        .unwrap();
    }
    for (a, b) in d.edges() {
        let path = if a.node().is_some() && a.node() == b.node() {
            "to[loop above]"
        } else {
            "--"
        };
        writeln!(
            s,
            "  \\draw ({}) {path} ({}); % {a} -- {b}",
            name(a),
            name(b)
        )
        .unwrap();
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}
