//! Diagram data model: generator nodes, port wiring and the categorical
//! combinators (sequential composition, tensor, bending).
//!
//! A [`Diagram`] is an open port graph. Every node owns `degree` ports
//! numbered from zero, inputs first. The diagram boundary is a list of input
//! slots and a list of output slots; each slot is itself a port. Wires are
//! symmetric links between two ports, so identities, swaps, caps and cups are
//! pure wiring and never appear as nodes.
//!
//! Boundary order follows the big-endian convention used throughout the
//! crate: for an `m`-wire boundary, the slot at position `p` (left to right)
//! carries bit `m - 1 - p` of the basis index.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = usize;

/// Generator kinds. Wire-structure generators (identity, swap, cap, cup) are
/// encoded in the wiring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NodeKind {
    /// Green spider `|0..0><0..0| + a |1..1><1..1|`.
    Z(C64),
    /// Unnormalised Hadamard `[[1, 1], [1, -1]]`.
    H,
    /// Triangle `[[1, 1], [0, 1]]`; port 0 is the input, port 1 the output.
    Triangle,
    /// Inverse triangle `[[1, -1], [0, 1]]`; port 0 is the input.
    TriangleInv,
}

impl NodeKind {
    pub fn phase(&self) -> Option<C64> {
        match self {
            NodeKind::Z(a) => Some(*a),
            _ => None,
        }
    }

    pub fn is_z(&self) -> bool {
        matches!(self, NodeKind::Z(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            NodeKind::Z(_) => "z",
            NodeKind::H => "h",
            NodeKind::Triangle => "t",
            NodeKind::TriangleInv => "tinv",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub n_in: usize,
    pub n_out: usize,
}

impl Node {
    pub fn degree(&self) -> usize {
        self.n_in + self.n_out
    }
}

/// A wire endpoint: a boundary slot or a numbered port of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    Input(usize),
    Output(usize),
    Node(NodeId, usize),
}

impl Port {
    pub fn node(&self) -> Option<NodeId> {
        match self {
            Port::Node(id, _) => Some(*id),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        !matches!(self, Port::Node(..))
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Port::Input(i) => write!(f, "in[{i}]"),
            Port::Output(j) => write!(f, "out[{j}]"),
            Port::Node(id, k) => write!(f, "n{id}.{k}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("arity mismatch: expected {expected} wires, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("port {0} is not attached to any wire")]
    DanglingPort(Port),
    #[error("port {0} is already wired")]
    PortInUse(Port),
    #[error("port {0} does not exist")]
    InvalidPort(Port),
    #[error("port {0} cannot be wired to itself")]
    SelfLink(Port),
    #[error("node kind {kind} must have exactly one input and one output, got {n_in}->{n_out}")]
    InvalidDegree {
        kind: &'static str,
        n_in: usize,
        n_out: usize,
    },
    #[error("x-spider phase must be 0 or pi")]
    InvalidXPhase,
    #[error("expected a state (no inputs), found {0} inputs")]
    NotAState(usize),
}

/// Phase of the derived red (X) spider; only `0` and `pi` exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum XPhase {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "pi")]
    Pi,
}

impl XPhase {
    /// Accepts an angle that is (numerically) 0 or pi.
    pub fn from_angle(tau: f64) -> Result<Self, DiagramError> {
        if tau.abs() < 1e-12 {
            Ok(XPhase::Zero)
        } else if (tau - PI).abs() < 1e-12 {
            Ok(XPhase::Pi)
        } else {
            Err(DiagramError::InvalidXPhase)
        }
    }

    /// `e^{i tau}` as a green phase.
    pub fn green_phase(self) -> C64 {
        match self {
            XPhase::Zero => C64::new(1.0, 0.0),
            XPhase::Pi => C64::new(-1.0, 0.0),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            XPhase::Zero => XPhase::Pi,
            XPhase::Pi => XPhase::Zero,
        }
    }
}

/// Phases add modulo `2 pi`.
impl std::ops::Add for XPhase {
    type Output = XPhase;

    fn add(self, other: Self) -> Self {
        if self == other {
            XPhase::Zero
        } else {
            XPhase::Pi
        }
    }
}

/// Open port graph of generator nodes with ordered boundaries.
///
/// Diagrams are values: combinators return new diagrams and never mutate
/// their arguments.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    nodes: BTreeMap<NodeId, Node>,
    links: BTreeMap<Port, Port>,
    n_inputs: usize,
    n_outputs: usize,
    next_id: NodeId,
}

impl Diagram {
    /// The empty diagram `0 -> 0`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::unwired(n, n);
        for i in 0..n {
            d.link_unchecked(Port::Input(i), Port::Output(i));
        }
        d
    }

    /// Wire permutation: input `i` is routed to output `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut d = Self::unwired(n, n);
        for (i, &j) in perm.iter().enumerate() {
            assert!(j < n, "permutation target out of range");
            d.link_unchecked(Port::Input(i), Port::Output(j));
        }
        d.validate().expect("permutation must be a bijection");
        d
    }

    pub fn swap() -> Self {
        Self::permutation(&[1, 0])
    }

    pub fn cap() -> Self {
        let mut d = Self::unwired(0, 2);
        d.link_unchecked(Port::Output(0), Port::Output(1));
        d
    }

    pub fn cup() -> Self {
        let mut d = Self::unwired(2, 0);
        d.link_unchecked(Port::Input(0), Port::Input(1));
        d
    }

    /// Green spider `n -> m` with complex parameter `a`.
    pub fn z_spider(n: usize, m: usize, a: C64) -> Self {
        let mut b = DiagramBuilder::new(n, m);
        let z = b.add_node(NodeKind::Z(a), n, m);
        for i in 0..n {
            b.link(Port::Input(i), Port::Node(z, i)).unwrap();
        }
        for j in 0..m {
            b.link(Port::Node(z, n + j), Port::Output(j)).unwrap();
        }
        b.build().unwrap()
    }

    fn single(kind: NodeKind) -> Self {
        let mut b = DiagramBuilder::new(1, 1);
        let v = b.add_node(kind, 1, 1);
        b.link(Port::Input(0), Port::Node(v, 0)).unwrap();
        b.link(Port::Node(v, 1), Port::Output(0)).unwrap();
        b.build().unwrap()
    }

    pub fn hadamard() -> Self {
        Self::single(NodeKind::H)
    }

    pub fn triangle() -> Self {
        Self::single(NodeKind::Triangle)
    }

    pub fn triangle_inv() -> Self {
        Self::single(NodeKind::TriangleInv)
    }

    /// A `0 -> 0` diagram interpreting to `value`: a leg-free green spider
    /// with parameter `value - 1`.
    pub fn scalar(value: C64) -> Self {
        Self::z_spider(0, 0, value - 1.0)
    }

    /// Red spider `n -> m`: the green spider `e^{i tau}` conjugated by `H` on
    /// every leg, together with a `1/2` scalar node. Its interpretation is
    /// exactly the parity tensor (odd parity for `tau = pi`).
    pub fn x_spider(n: usize, m: usize, tau: XPhase) -> Self {
        let mut b = DiagramBuilder::new(n, m);
        let (ins, outs) = b.add_x_spider(tau, n, m);
        for (i, p) in ins.into_iter().enumerate() {
            b.link(Port::Input(i), p).unwrap();
        }
        for (j, p) in outs.into_iter().enumerate() {
            b.link(p, Port::Output(j)).unwrap();
        }
        b.build().unwrap()
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of wires (unordered links).
    pub fn edge_count(&self) -> usize {
        self.links.len() / 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().map(|(id, n)| (*id, n))
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn partner(&self, p: Port) -> Option<Port> {
        self.links.get(&p).copied()
    }

    /// Each wire once, as `(a, b)` with `a <= b`.
    pub fn edges(&self) -> impl Iterator<Item = (Port, Port)> + '_ {
        self.links
            .iter()
            .filter(|(a, b)| a <= b)
            .map(|(a, b)| (*a, *b))
    }

    /// Ports of `id` paired with their partners, in port order.
    pub fn neighbours(&self, id: NodeId) -> Vec<(usize, Port)> {
        let deg = self.nodes.get(&id).map_or(0, Node::degree);
        (0..deg)
            .map(|k| (k, self.links[&Port::Node(id, k)]))
            .collect()
    }

    pub fn is_state(&self) -> bool {
        self.n_inputs == 0
    }

    /// Checks that every port and boundary slot is wired exactly once and
    /// that degree-2 kinds have one input and one output.
    pub fn validate(&self) -> Result<(), DiagramError> {
        for (id, node) in &self.nodes {
            if !node.kind.is_z() && (node.n_in != 1 || node.n_out != 1) {
                return Err(DiagramError::InvalidDegree {
                    kind: node.kind.label(),
                    n_in: node.n_in,
                    n_out: node.n_out,
                });
            }
            for k in 0..node.degree() {
                if !self.links.contains_key(&Port::Node(*id, k)) {
                    return Err(DiagramError::DanglingPort(Port::Node(*id, k)));
                }
            }
        }
        for i in 0..self.n_inputs {
            if !self.links.contains_key(&Port::Input(i)) {
                return Err(DiagramError::DanglingPort(Port::Input(i)));
            }
        }
        for j in 0..self.n_outputs {
            if !self.links.contains_key(&Port::Output(j)) {
                return Err(DiagramError::DanglingPort(Port::Output(j)));
            }
        }
        for (a, b) in &self.links {
            if !self.port_exists(*a) {
                return Err(DiagramError::InvalidPort(*a));
            }
            if a == b {
                return Err(DiagramError::SelfLink(*a));
            }
            if self.links.get(b) != Some(a) {
                return Err(DiagramError::DanglingPort(*b));
            }
        }
        Ok(())
    }

    fn port_exists(&self, p: Port) -> bool {
        match p {
            Port::Input(i) => i < self.n_inputs,
            Port::Output(j) => j < self.n_outputs,
            Port::Node(id, k) => self.nodes.get(&id).is_some_and(|n| k < n.degree()),
        }
    }

    /// Returns a copy with every green parameter replaced by `f(a)`.
    pub fn map_phases(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut d = self.clone();
        for node in d.nodes.values_mut() {
            if let NodeKind::Z(a) = node.kind {
                node.kind = NodeKind::Z(f(a));
            }
        }
        d
    }

    /// Copy with node ids renumbered `0..k` in ascending order of the old ids.
    pub fn normalized_ids(&self) -> Self {
        let remap: BTreeMap<NodeId, NodeId> = self
            .nodes
            .keys()
            .enumerate()
            .map(|(i, id)| (*id, i))
            .collect();
        let rename = |p: Port| match p {
            Port::Node(id, k) => Port::Node(remap[&id], k),
            other => other,
        };
        Diagram {
            nodes: self
                .nodes
                .iter()
                .map(|(id, n)| (remap[id], n.clone()))
                .collect(),
            links: self
                .links
                .iter()
                .map(|(a, b)| (rename(*a), rename(*b)))
                .collect(),
            n_inputs: self.n_inputs,
            n_outputs: self.n_outputs,
            next_id: self.nodes.len(),
        }
    }

    /// Structural equality after id normalisation. Phases compare bitwise.
    pub fn structurally_equal(&self, other: &Diagram) -> bool {
        let a = self.normalized_ids();
        let b = other.normalized_ids();
        a.n_inputs == b.n_inputs
            && a.n_outputs == b.n_outputs
            && a.links == b.links
            && a.nodes.len() == b.nodes.len()
            && a.nodes.iter().zip(b.nodes.iter()).all(|((_, x), (_, y))| {
                x.n_in == y.n_in
                    && x.n_out == y.n_out
                    && match (x.kind, y.kind) {
                        (NodeKind::Z(p), NodeKind::Z(q)) => {
                            p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits()
                        }
                        (k1, k2) => k1 == k2,
                    }
            })
    }

    /// Order-sensitive structural hash, used to detect stale match sites.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.n_inputs.hash(&mut h);
        self.n_outputs.hash(&mut h);
        for (id, node) in &self.nodes {
            id.hash(&mut h);
            node.n_in.hash(&mut h);
            node.n_out.hash(&mut h);
            node.kind.label().hash(&mut h);
            if let NodeKind::Z(a) = node.kind {
                a.re.to_bits().hash(&mut h);
                a.im.to_bits().hash(&mut h);
            }
        }
        for (a, b) in &self.links {
            a.hash(&mut h);
            b.hash(&mut h);
        }
        h.finish()
    }

    // --- crate-internal mutation used by builders and rewrites -------------

    pub(crate) fn unwired(n: usize, m: usize) -> Self {
        Diagram {
            n_inputs: n,
            n_outputs: m,
            ..Self::default()
        }
    }

    pub(crate) fn set_outputs(&mut self, m: usize) {
        self.n_outputs = m;
    }

    pub(crate) fn insert_node(&mut self, kind: NodeKind, n_in: usize, n_out: usize) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes.insert(id, Node { kind, n_in, n_out });
        id
    }

    pub(crate) fn link_unchecked(&mut self, a: Port, b: Port) {
        self.links.insert(a, b);
        self.links.insert(b, a);
    }

    pub(crate) fn unlink(&mut self, a: Port) -> Option<Port> {
        let b = self.links.remove(&a)?;
        self.links.remove(&b);
        Some(b)
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> Option<&mut Node> {
        self.nodes.get_mut(&id)
    }

    /// Removes a node and all wires touching it; returns the former partners
    /// of its still-wired ports in port order (a self-loop partner is
    /// reported as the node's own port).
    pub(crate) fn remove_node(&mut self, id: NodeId) -> Vec<Port> {
        let deg = self.nodes.get(&id).map_or(0, Node::degree);
        let partners: Vec<Port> = (0..deg)
            .filter_map(|k| self.links.get(&Port::Node(id, k)).copied())
            .collect();
        for k in 0..deg {
            if let Some(b) = self.links.remove(&Port::Node(id, k)) {
                self.links.remove(&b);
            }
        }
        self.nodes.remove(&id);
        partners
    }

    /// Replaces the ports of `id` by a fresh numbering: `keep` lists the old
    /// port numbers to retain, in their new order. Wires on dropped ports must
    /// already be removed.
    pub(crate) fn renumber_ports(&mut self, id: NodeId, keep: &[usize], n_in: usize) {
        let partners: Vec<Port> = keep
            .iter()
            .map(|&k| *self.links.get(&Port::Node(id, k)).expect("kept port wired"))
            .collect();
        for &k in keep {
            self.unlink(Port::Node(id, k));
        }
        for (new_k, partner) in partners.into_iter().enumerate() {
            // a self-loop between two kept ports must be re-targeted as well
            let partner = match partner {
                Port::Node(pid, pk) if pid == id => {
                    let nk = keep
                        .iter()
                        .position(|&k| k == pk)
                        .expect("loop on kept port");
                    Port::Node(id, nk)
                }
                other => other,
            };
            self.link_unchecked(Port::Node(id, new_k), partner);
        }
        let node = self.nodes.get_mut(&id).expect("node exists");
        node.n_in = n_in;
        node.n_out = keep.len() - n_in;
    }

    /// Connects the two wire ends `a` and `b` that used to meet at a removed
    /// pass-through structure. When `a` and `b` are the two ends of the same
    /// removed structure, a closed loop is formed; returns `true` in that
    /// case (the caller accounts for the factor 2).
    pub(crate) fn join(&mut self, a: Port, b: Port) -> bool {
        if a == b {
            return true;
        }
        self.link_unchecked(a, b);
        false
    }

    fn offset(p: Port, node_off: usize, in_off: usize, out_off: usize) -> Port {
        match p {
            Port::Input(i) => Port::Input(i + in_off),
            Port::Output(j) => Port::Output(j + out_off),
            Port::Node(id, k) => Port::Node(id + node_off, k),
        }
    }
}

/// Incremental construction of a diagram from raw nodes and wires.
#[derive(Debug)]
pub struct DiagramBuilder {
    d: Diagram,
}

impl DiagramBuilder {
    pub fn new(n_inputs: usize, n_outputs: usize) -> Self {
        DiagramBuilder {
            d: Diagram::unwired(n_inputs, n_outputs),
        }
    }

    pub fn add_node(&mut self, kind: NodeKind, n_in: usize, n_out: usize) -> NodeId {
        self.d.insert_node(kind, n_in, n_out)
    }

    /// Adds a `1 -> 1` node and returns `(input port, output port)`.
    pub fn add_unary(&mut self, kind: NodeKind) -> (Port, Port) {
        let v = self.add_node(kind, 1, 1);
        (Port::Node(v, 0), Port::Node(v, 1))
    }

    pub fn link(&mut self, a: Port, b: Port) -> Result<(), DiagramError> {
        if a == b {
            return Err(DiagramError::SelfLink(a));
        }
        for p in [a, b] {
            if !self.d.port_exists(p) {
                return Err(DiagramError::InvalidPort(p));
            }
            if self.d.links.contains_key(&p) {
                return Err(DiagramError::PortInUse(p));
            }
        }
        self.d.link_unchecked(a, b);
        Ok(())
    }

    /// Adds the red-spider macro and returns its (input ports, output ports).
    pub fn add_x_spider(&mut self, tau: XPhase, n: usize, m: usize) -> (Vec<Port>, Vec<Port>) {
        let z = self.add_node(NodeKind::Z(tau.green_phase()), n, m);
        let mut ins = Vec::with_capacity(n);
        for i in 0..n {
            let (h_in, h_out) = self.add_unary(NodeKind::H);
            self.d.link_unchecked(h_out, Port::Node(z, i));
            ins.push(h_in);
        }
        let mut outs = Vec::with_capacity(m);
        for j in 0..m {
            let (h_in, h_out) = self.add_unary(NodeKind::H);
            self.d.link_unchecked(Port::Node(z, n + j), h_in);
            outs.push(h_out);
        }
        self.add_node(NodeKind::Z(C64::new(-0.5, 0.0)), 0, 0);
        (ins, outs)
    }

    /// Adds a scalar factor as a leg-free green spider.
    pub fn add_scalar(&mut self, value: C64) {
        self.add_node(NodeKind::Z(value - 1.0), 0, 0);
    }

    pub fn build(self) -> Result<Diagram, DiagramError> {
        self.d.validate()?;
        Ok(self.d)
    }
}

/// Sequential composition: `d1 : n -> k` followed by `d2 : k -> m`.
///
/// The interpretation is `[[d2]] * [[d1]]`. Closed wire loops created by the
/// gluing are kept as an identity spider carrying a self-loop.
pub fn compose(d1: &Diagram, d2: &Diagram) -> Result<Diagram, DiagramError> {
    if d1.n_outputs != d2.n_inputs {
        return Err(DiagramError::ArityMismatch {
            expected: d1.n_outputs,
            found: d2.n_inputs,
        });
    }
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
    enum End {
        Real(Port),
        Mid(usize, bool),
    }
    let off = d1.next_id;
    let mut map: BTreeMap<End, End> = BTreeMap::new();
    let e1 = |p: Port| match p {
        Port::Output(j) => End::Mid(j, false),
        other => End::Real(other),
    };
    let e2 = |p: Port| match p {
        Port::Input(j) => End::Mid(j, true),
        other => End::Real(Diagram::offset(other, off, 0, 0)),
    };
    for (a, b) in &d1.links {
        map.insert(e1(*a), e1(*b));
    }
    for (a, b) in &d2.links {
        map.insert(e2(*a), e2(*b));
    }
    let mut loops = 0usize;
    for j in 0..d1.n_outputs {
        let a = map.remove(&End::Mid(j, false)).expect("glued slot wired");
        let b = map.remove(&End::Mid(j, true)).expect("glued slot wired");
        if a == End::Mid(j, true) {
            loops += 1;
            continue;
        }
        map.insert(a, b);
        map.insert(b, a);
    }
    let mut d = Diagram {
        nodes: d1.nodes.clone(),
        links: BTreeMap::new(),
        n_inputs: d1.n_inputs,
        n_outputs: d2.n_outputs,
        next_id: d1.next_id + d2.next_id,
    };
    for (id, node) in &d2.nodes {
        d.nodes.insert(id + off, node.clone());
    }
    for (a, b) in map {
        match (a, b) {
            (End::Real(a), End::Real(b)) => {
                d.links.insert(a, b);
            }
            _ => unreachable!("all glue points resolved"),
        }
    }
    for _ in 0..loops {
        let v = d.insert_node(NodeKind::Z(C64::new(1.0, 0.0)), 1, 1);
        d.link_unchecked(Port::Node(v, 0), Port::Node(v, 1));
    }
    Ok(d)
}

/// Parallel composition; `d1`'s boundary slots precede `d2`'s.
pub fn tensor(d1: &Diagram, d2: &Diagram) -> Diagram {
    let off = d1.next_id;
    let mut d = d1.clone();
    d.n_inputs += d2.n_inputs;
    d.n_outputs += d2.n_outputs;
    d.next_id += d2.next_id;
    for (id, node) in &d2.nodes {
        d.nodes.insert(id + off, node.clone());
    }
    for (a, b) in &d2.links {
        d.links.insert(
            Diagram::offset(*a, off, d1.n_inputs, d1.n_outputs),
            Diagram::offset(*b, off, d1.n_inputs, d1.n_outputs),
        );
    }
    d
}

/// Map-state duality: bends every input of `d : n -> m` upward with a cap,
/// giving a state `0 -> n + m`. The bent inputs take the left-most `n`
/// output slots in reversed order (input `n - 1` first) so that the caps
/// nest without crossing; the original outputs follow.
pub fn bend_to_state(d: &Diagram) -> Diagram {
    let n = d.n_inputs;
    let rename = |p: Port| match p {
        Port::Input(i) => Port::Output(n - 1 - i),
        Port::Output(j) => Port::Output(n + j),
        other => other,
    };
    Diagram {
        nodes: d.nodes.clone(),
        links: d
            .links
            .iter()
            .map(|(a, b)| (rename(*a), rename(*b)))
            .collect(),
        n_inputs: 0,
        n_outputs: n + d.n_outputs,
        next_id: d.next_id,
    }
}

/// Inverse of [`bend_to_state`]: bends the left-most `n` outputs of a state
/// back down into inputs with cups.
pub fn unbend_state(d: &Diagram, n: usize) -> Result<Diagram, DiagramError> {
    if d.n_inputs != 0 {
        return Err(DiagramError::NotAState(d.n_inputs));
    }
    if n > d.n_outputs {
        return Err(DiagramError::ArityMismatch {
            expected: n,
            found: d.n_outputs,
        });
    }
    let rename = |p: Port| match p {
        Port::Output(j) if j < n => Port::Input(n - 1 - j),
        Port::Output(j) => Port::Output(j - n),
        other => other,
    };
    Ok(Diagram {
        nodes: d.nodes.clone(),
        links: d
            .links
            .iter()
            .map(|(a, b)| (rename(*a), rename(*b)))
            .collect(),
        n_inputs: n,
        n_outputs: d.n_outputs - n,
        next_id: d.next_id,
    })
}

/// Upside-down flip: inputs and outputs exchange roles, left-right order is
/// kept. The interpretation of the flip is the transpose.
pub fn flip(d: &Diagram) -> Diagram {
    let rename = |p: Port| match p {
        Port::Input(i) => Port::Output(i),
        Port::Output(j) => Port::Input(j),
        other => other,
    };
    let mut out = Diagram {
        nodes: d.nodes.clone(),
        links: d
            .links
            .iter()
            .map(|(a, b)| (rename(*a), rename(*b)))
            .collect(),
        n_inputs: d.n_outputs,
        n_outputs: d.n_inputs,
        next_id: d.next_id,
    };
    let z_nodes: Vec<(NodeId, usize, usize)> = out
        .nodes
        .iter()
        .filter(|(_, n)| n.kind.is_z())
        .map(|(id, n)| (*id, n.n_in, n.n_out))
        .collect();
    for (id, n_in, n_out) in z_nodes {
        if n_in + n_out == 0 {
            continue;
        }
        let keep: Vec<usize> = (n_in..n_in + n_out).chain(0..n_in).collect();
        out.renumber_ports(id, &keep, n_out);
    }
    out
}
