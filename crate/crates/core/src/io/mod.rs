//! Reading and writing diagrams, matrices and graph exports.
//!
//! Diagrams are stored as version-tagged JSON:
//!
//! ```json
//! {
//!   "version": "zxel/1",
//!   "nodes": [
//!     {"id": 0, "kind": "z", "phase": [2.0, 0.0], "inputs": 1, "outputs": 1},
//!     {"id": 1, "kind": "x", "tau": "pi", "inputs": 1, "outputs": 1}
//!   ],
//!   "edges": [[{"node": 0, "port": 1}, {"node": 1, "port": 0}]],
//!   "inputs": [{"node": 0, "port": 0}],
//!   "outputs": [{"node": 1, "port": 1}]
//! }
//! ```
//!
//! Node kinds are `z`, `h`, `t`, `tinv` and the red-spider macro `x`, which
//! is expanded when reading. Ports number the inputs first. `inputs[i]` and
//! `outputs[j]` name what each boundary slot is wired to, which may be
//! another boundary slot (`{"input": i}` or `{"output": j}`).

mod export;
mod matrix;

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramBuilder, NodeKind, Port, XPhase};

pub use export::{export, ExportFormat};
pub use matrix::{format_matrix, parse_matrix};

pub const FORMAT_VERSION: &str = "zxel/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum PortRec {
    Node { node: usize, port: usize },
    Input { input: usize },
    Output { output: usize },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRec {
    id: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase: Option<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<XPhase>,
    inputs: usize,
    outputs: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    version: String,
    #[serde(default)]
    nodes: Vec<NodeRec>,
    #[serde(default)]
    edges: Vec<[PortRec; 2]>,
    #[serde(default)]
    inputs: Vec<PortRec>,
    #[serde(default)]
    outputs: Vec<PortRec>,
}

/// Parses a diagram file. Errors carry a JSON position or a path into the
/// document.
pub fn parse_diagram(text: &str) -> Result<Diagram, IoError> {
    let doc: DiagramDoc = serde_json::from_str(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(invalid(
            "version",
            format!(
                "unsupported version {:?}, expected {FORMAT_VERSION:?}",
                doc.version
            ),
        ));
    }
    let mut b = DiagramBuilder::new(doc.inputs.len(), doc.outputs.len());
    // file id -> builder ports of each leg
    let mut legs: BTreeMap<usize, Vec<Port>> = BTreeMap::new();
    for (i, rec) in doc.nodes.iter().enumerate() {
        let path = format!("nodes[{i}]");
        if legs.contains_key(&rec.id) {
            return Err(invalid(path, format!("duplicate node id {}", rec.id)));
        }
        let unary = |kind| {
            if rec.inputs != 1 || rec.outputs != 1 {
                Err(invalid(
                    format!("nodes[{i}]"),
                    format!("kind {:?} needs exactly one input and one output", rec.kind),
                ))
            } else {
                Ok(kind)
            }
        };
        let ports = match rec.kind.as_str() {
            "z" => {
                let phase = rec.phase.ok_or_else(|| {
                    invalid(format!("{path}.phase"), "green spider needs a phase")
                })?;
                let id = b.add_node(NodeKind::Z(phase), rec.inputs, rec.outputs);
                (0..rec.inputs + rec.outputs)
                    .map(|k| Port::Node(id, k))
                    .collect()
            }
            "h" | "t" | "tinv" => {
                let kind = unary(match rec.kind.as_str() {
                    "h" => NodeKind::H,
                    "t" => NodeKind::Triangle,
                    _ => NodeKind::TriangleInv,
                })?;
                let (p, q) = b.add_unary(kind);
                vec![p, q]
            }
            "x" => {
                let tau = rec.tau.ok_or_else(|| {
                    invalid(
                        format!("{path}.tau"),
                        "red spider needs tau \"0\" or \"pi\"",
                    )
                })?;
                let (mut ins, outs) = b.add_x_spider(tau, rec.inputs, rec.outputs);
                ins.extend(outs);
                ins
            }
            other => {
                return Err(invalid(
                    format!("{path}.kind"),
                    format!("unknown node kind {other:?}"),
                ))
            }
        };
        legs.insert(rec.id, ports);
    }

    let resolve = |rec: &PortRec, path: &str| -> Result<Port, IoError> {
        match *rec {
            PortRec::Node { node, port } => {
                let ports = legs
                    .get(&node)
                    .ok_or_else(|| invalid(path, format!("unknown node {node}")))?;
                ports
                    .get(port)
                    .copied()
                    .ok_or_else(|| invalid(path, format!("node {node} has no port {port}")))
            }
            PortRec::Input { input } => Ok(Port::Input(input)),
            PortRec::Output { output } => Ok(Port::Output(output)),
        }
    };
    let link_err =
        |path: String| move |e: crate::diagram::DiagramError| invalid(path, e.to_string());

    for (i, [p, q]) in doc.edges.iter().enumerate() {
        let path = format!("edges[{i}]");
        let (a, c) = (resolve(p, &path)?, resolve(q, &path)?);
        if a.is_boundary() || c.is_boundary() {
            return Err(invalid(
                path,
                "boundary slots are wired through \"inputs\"/\"outputs\"",
            ));
        }
        b.link(a, c).map_err(link_err(path))?;
    }
    let boundary = doc
        .inputs
        .iter()
        .enumerate()
        .map(|(i, r)| (Port::Input(i), r, format!("inputs[{i}]")))
        .chain(
            doc.outputs
                .iter()
                .enumerate()
                .map(|(j, r)| (Port::Output(j), r, format!("outputs[{j}]"))),
        )
        .collect::<Vec<_>>();
    let listed: BTreeMap<Port, Port> = boundary
        .iter()
        .map(|(slot, r, path)| Ok((*slot, resolve(r, path)?)))
        .collect::<Result<_, IoError>>()?;
    for (slot, _, path) in &boundary {
        let target = listed[slot];
        if target.is_boundary() {
            // wire between two slots: both must name each other, link once
            if listed.get(&target) != Some(slot) {
                return Err(invalid(
                    path.clone(),
                    format!("slot {target} does not point back"),
                ));
            }
            if slot < &target {
                b.link(*slot, target).map_err(link_err(path.clone()))?;
            }
        } else {
            b.link(*slot, target).map_err(link_err(path.clone()))?;
        }
    }
    b.build().map_err(|e| invalid("diagram", e.to_string()))
}

fn port_rec(p: Port) -> PortRec {
    match p {
        Port::Input(i) => PortRec::Input { input: i },
        Port::Output(j) => PortRec::Output { output: j },
        Port::Node(node, port) => PortRec::Node { node, port },
    }
}

/// Serialises a diagram with node ids renumbered from zero.
pub fn serialize_diagram(d: &Diagram) -> String {
    let d = d.normalized_ids();
    let nodes = d
        .nodes()
        .map(|(id, n)| NodeRec {
            id,
            kind: n.kind.label().to_string(),
            phase: n.kind.phase(),
            tau: None,
            inputs: n.n_in,
            outputs: n.n_out,
        })
        .collect();
    let edges = d
        .edges()
        .filter(|(a, c)| !a.is_boundary() && !c.is_boundary())
        .map(|(a, c)| [port_rec(a), port_rec(c)])
        .collect();
    let slot = |p: Port| port_rec(d.partner(p).expect("validated diagram"));
    let doc = DiagramDoc {
        version: FORMAT_VERSION.to_string(),
        nodes,
        edges,
        inputs: (0..d.n_inputs()).map(|i| slot(Port::Input(i))).collect(),
        outputs: (0..d.n_outputs()).map(|j| slot(Port::Output(j))).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("diagram serialises");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{seq, w_node};
    use crate::semantics::interpret;

    #[test]
    fn round_trip_is_identity() {
        let d = seq(&[
            w_node(),
            crate::diagram::tensor(
                &Diagram::hadamard(),
                &Diagram::z_spider(1, 1, C64::new(0.1, 0.2)),
            ),
        ]);
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        assert!(back.structurally_equal(&d));
        assert_eq!(serialize_diagram(&back), text);
    }

    #[test]
    fn boundary_wires_round_trip() {
        for d in [
            Diagram::cap(),
            Diagram::cup(),
            Diagram::swap(),
            Diagram::empty(),
        ] {
            let back = parse_diagram(&serialize_diagram(&d)).unwrap();
            assert!(back.structurally_equal(&d));
        }
    }

    #[test]
    fn x_macro_expands() {
        let text = r#"{"version":"zxel/1",
            "nodes":[{"id":5,"kind":"x","tau":"pi","inputs":1,"outputs":1}],
            "inputs":[{"node":5,"port":0}],"outputs":[{"node":5,"port":1}]}"#;
        let d = parse_diagram(text).unwrap();
        let m = interpret(&d).unwrap();
        assert!((m.get(0, 1) - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(m.get(0, 0).norm() < 1e-12);
    }

    #[test]
    fn errors_are_located() {
        let err = parse_diagram("{\"version\": \"zxel/1\",\n \"nodes\": 3}").unwrap_err();
        assert!(matches!(err, IoError::Json { line: 2, .. }), "{err}");
        let err = parse_diagram(r#"{"version":"zxel/9"}"#).unwrap_err();
        assert!(err.to_string().starts_with("version:"));
        let err = parse_diagram(
            r#"{"version":"zxel/1","nodes":[{"id":0,"kind":"h","inputs":1,"outputs":1}],
                "inputs":[{"node":0,"port":0}],"outputs":[{"node":1,"port":1}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "outputs[0]: unknown node 1");
        let err = parse_diagram(
            r#"{"version":"zxel/1","nodes":[{"id":0,"kind":"h","inputs":1,"outputs":1}],
                "inputs":[{"node":0,"port":0}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("not attached"), "{err}");
        let err = parse_diagram(
            r#"{"version":"zxel/1","nodes":[{"id":0,"kind":"q","inputs":1,"outputs":1}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "nodes[0].kind: unknown node kind \"q\"");
    }
}
