//! Normal forms of state diagrams.
//!
//! Every state `0 -> m` equals a unique diagram that starts from `|1..1>`,
//! applies the `2^m - 1` row additions (one per target row `j`, in
//! increasing `j`) and finishes with one row multiplication. The normal form
//! is therefore identified with its coefficient vector. Maps are normalised
//! through map-state duality.

mod elementary;

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{bend_to_state, Diagram, NodeId, NodeKind, Port};
use crate::gadgets::{self, Circuit};
use crate::semantics::DEFAULT_WIRE_CAP;

pub use elementary::{compose_specs, decompose, ElementaryError, ElementarySpec, MAX_WIRES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("row addition needs a non-empty wire subset")]
    EmptySubset,
    #[error("wire index {index} out of range for {m} wires")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("self-plug needs two distinct wires of at least two")]
    InvalidPlug,
    #[error("{wires} open wires exceed the wire cap {cap}")]
    TooLarge { wires: usize, cap: usize },
}

/// Coefficient vector of a normal form on `m` wires (`coeffs.len() == 2^m`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    pub m: usize,
    pub coeffs: Vec<C64>,
}

impl NormalForm {
    /// Value of a scalar normal form; `None` when `m > 0`.
    pub fn scalar_value(&self) -> Option<C64> {
        (self.m == 0).then(|| self.coeffs[0])
    }

    /// Coefficients of the row additions, indexed by target row `j`.
    pub fn addition_coefficients(&self) -> &[C64] {
        &self.coeffs[..self.coeffs.len() - 1]
    }

    pub fn multiplication_coefficient(&self) -> C64 {
        self.coeffs[self.coeffs.len() - 1]
    }
}

/// Bits that are zero in `j` on an `m`-wire boundary: the subset `S` of the
/// row addition that targets row `j`.
pub fn subset_for_row(m: usize, j: usize) -> Vec<usize> {
    (0..m).filter(|b| j >> b & 1 == 0).collect()
}

/// Row-addition diagram `I + a e_j e_last^T`, `j = 2^m - 1 - sum 2^i`.
pub fn row_addition_diagram(
    m: usize,
    a: C64,
    subset: &[usize],
) -> Result<Diagram, NormalFormError> {
    if subset.is_empty() {
        return Err(NormalFormError::EmptySubset);
    }
    if let Some(&index) = subset.iter().find(|&&i| i >= m) {
        return Err(NormalFormError::IndexOutOfRange { index, m });
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    Ok(gadgets::row_addition(m, a, &s))
}

/// Row-multiplication diagram `diag(1, .., 1, a)`.
pub fn row_multiplication_diagram(m: usize, a: C64) -> Diagram {
    gadgets::row_multiplication(m, a)
}

pub fn nf_from_vector(v: &[C64]) -> Result<NormalForm, NormalFormError> {
    if !v.len().is_power_of_two() {
        return Err(NormalFormError::NotPowerOfTwo(v.len()));
    }
    Ok(NormalForm {
        m: v.len().trailing_zeros() as usize,
        coeffs: v.to_vec(),
    })
}

pub fn scalar_nf(a: C64) -> NormalForm {
    NormalForm {
        m: 0,
        coeffs: vec![a],
    }
}

pub use gadgets::scalar_nf_diagram;

/// The normal-form diagram: `|1..1>`, then the row additions in increasing
/// target row, then the row multiplication.
pub fn nf_to_diagram(nf: &NormalForm) -> Diagram {
    let m = nf.m;
    if m == 0 {
        return scalar_nf_diagram(nf.coeffs[0]);
    }
    let all: Vec<usize> = (0..m).collect();
    let mut c = Circuit::ones(m);
    for (j, a) in nf.addition_coefficients().iter().enumerate() {
        c.apply(&all, &gadgets::row_addition(m, *a, &subset_for_row(m, j)));
    }
    c.apply(
        &all,
        &gadgets::row_multiplication(m, nf.multiplication_coefficient()),
    );
    c.finish()
}

/// `coeffs[i * 2^n + j] = a_i * b_j`.
pub fn nf_tensor(a: &NormalForm, b: &NormalForm) -> NormalForm {
    let coeffs = a
        .coeffs
        .iter()
        .flat_map(|x| b.coeffs.iter().map(move |y| x * y))
        .collect();
    NormalForm {
        m: a.m + b.m,
        coeffs,
    }
}

/// Relabels wires: old position `i` moves to position `perm[i]`.
pub fn permute_wires(nf: &NormalForm, perm: &[usize]) -> NormalForm {
    let m = nf.m;
    assert_eq!(perm.len(), m, "permutation covers every wire");
    let mut coeffs = vec![C64::new(0.0, 0.0); nf.coeffs.len()];
    for (k, c) in nf.coeffs.iter().enumerate() {
        let mut t = 0usize;
        for (i, &p) in perm.iter().enumerate() {
            if k >> (m - 1 - i) & 1 == 1 {
                t |= 1 << (m - 1 - p);
            }
        }
        coeffs[t] = *c;
    }
    NormalForm { m, coeffs }
}

/// Connects wire positions `p` and `q` with a cup.
///
/// The pair is first moved to the right-most two positions, where the plug
/// reads `b_k = a_{4k} + a_{4k+3}`.
pub fn nf_self_plug(nf: &NormalForm, p: usize, q: usize) -> Result<NormalForm, NormalFormError> {
    let m = nf.m;
    if m < 2 || p == q {
        return Err(NormalFormError::InvalidPlug);
    }
    if let Some(&index) = [p, q].iter().find(|&&i| i >= m) {
        return Err(NormalFormError::IndexOutOfRange { index, m });
    }
    let mut perm = vec![0; m];
    let mut next = 0;
    for (i, slot) in perm.iter_mut().enumerate() {
        if i == p {
            *slot = m - 2;
        } else if i == q {
            *slot = m - 1;
        } else {
            *slot = next;
            next += 1;
        }
    }
    let moved = permute_wires(nf, &perm);
    let coeffs = (0..1usize << (m - 2))
        .map(|k| moved.coeffs[4 * k] + moved.coeffs[4 * k + 3])
        .collect();
    Ok(NormalForm { m: m - 2, coeffs })
}

/// Generators whose bent forms have fixed normal forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeneratorKind {
    /// Green copy `1 -> 2`.
    Copy,
    /// Green co-copy `2 -> 1`.
    Codot,
    /// Green state `0 -> 1` with parameter `a`.
    GreenState(C64),
    Identity,
    Cap,
    Cup,
    H,
    Triangle,
    TriangleInv,
    Swap,
}

fn real_nf(values: &[f64]) -> NormalForm {
    let coeffs: Vec<C64> = values.iter().map(|x| C64::new(*x, 0.0)).collect();
    nf_from_vector(&coeffs).expect("power-of-two table")
}

/// Normal form of a bent generator. Bent inputs precede outputs, in reverse
/// input order.
pub fn generator_nf(kind: GeneratorKind) -> NormalForm {
    match kind {
        GeneratorKind::Copy | GeneratorKind::Codot => {
            real_nf(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
        }
        GeneratorKind::GreenState(a) => NormalForm {
            m: 1,
            coeffs: vec![C64::new(1.0, 0.0), a],
        },
        GeneratorKind::Identity | GeneratorKind::Cap | GeneratorKind::Cup => {
            real_nf(&[1.0, 0.0, 0.0, 1.0])
        }
        GeneratorKind::H => real_nf(&[1.0, 1.0, 1.0, -1.0]),
        GeneratorKind::Triangle => real_nf(&[1.0, 0.0, 1.0, 1.0]),
        GeneratorKind::TriangleInv => real_nf(&[1.0, 0.0, -1.0, 1.0]),
        GeneratorKind::Swap => {
            let mut v = vec![0.0; 16];
            for k in [0, 5, 10, 15] {
                v[k] = 1.0;
            }
            real_nf(&v)
        }
    }
}

/// True iff both forms have the same wire count and coefficients agree
/// within `tol`.
pub fn nf_equal(a: &NormalForm, b: &NormalForm, tol: f64) -> bool {
    a.m == b.m
        && a.coeffs
            .iter()
            .zip(&b.coeffs)
            .all(|(x, y)| (x - y).norm() <= tol)
}

/// Largest coefficient deviation; `None` when wire counts differ.
pub fn nf_max_deviation(a: &NormalForm, b: &NormalForm) -> Option<f64> {
    (a.m == b.m).then(|| {
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    })
}

/// Normal form of a green spider with `degree` legs, built from a green
/// state and copies.
fn spider_nf(a: C64, degree: usize) -> NormalForm {
    let state = generator_nf(GeneratorKind::GreenState(a));
    if degree == 0 {
        let one = generator_nf(GeneratorKind::GreenState(C64::new(1.0, 0.0)));
        return nf_self_plug(&nf_tensor(&state, &one), 0, 1).expect("two wires");
    }
    let mut nf = state;
    for _ in 1..degree {
        // plug the last leg into the input leg of a fresh copy
        let k = nf.m;
        nf = nf_tensor(&nf, &generator_nf(GeneratorKind::Copy));
        nf = nf_self_plug(&nf, k - 1, k).expect("distinct wires");
    }
    nf
}

fn node_nf(kind: NodeKind, degree: usize) -> NormalForm {
    match kind {
        NodeKind::Z(a) => spider_nf(a, degree),
        NodeKind::H => generator_nf(GeneratorKind::H),
        NodeKind::Triangle => generator_nf(GeneratorKind::Triangle),
        NodeKind::TriangleInv => generator_nf(GeneratorKind::TriangleInv),
    }
}

fn layer_order(d: &Diagram) -> Vec<NodeId> {
    node_layers(d).into_iter().map(|(id, _)| id).collect()
}

/// Longest-path layering of the nodes along directed wires (node output
/// port to node input port), in placement order. Nodes on directed cycles
/// fall back to id order.
pub(crate) fn node_layers(d: &Diagram) -> Vec<(NodeId, usize)> {
    let mut preds: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut succs: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (id, node) in d.nodes() {
        preds.entry(id).or_default();
        succs.entry(id).or_default();
        for k in 0..node.n_in {
            if let Some(Port::Node(src, sk)) = d.partner(Port::Node(id, k)) {
                let src_node = d.node(src).expect("linked node exists");
                if sk >= src_node.n_in && src != id {
                    preds.entry(id).or_default().push(src);
                    succs.entry(src).or_default().push(id);
                }
            }
        }
    }
    let mut pending: BTreeMap<NodeId, usize> = preds.iter().map(|(id, p)| (*id, p.len())).collect();
    let mut layer: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut ready: std::collections::BTreeSet<(usize, NodeId)> = pending
        .iter()
        .filter(|(_, n)| **n == 0)
        .map(|(id, _)| (0, *id))
        .collect();
    let mut order = Vec::new();
    while order.len() < pending.len() {
        let (l, id) = match ready.pop_first() {
            Some(x) => x,
            None => {
                // break a directed cycle at the smallest unplaced id
                let id = *pending
                    .keys()
                    .find(|id| !layer.contains_key(id))
                    .expect("some node unplaced");
                let l = layer.values().copied().max().map_or(0, |x| x + 1);
                (l, id)
            }
        };
        if layer.contains_key(&id) {
            continue;
        }
        layer.insert(id, l);
        order.push((id, l));
        for s in &succs[&id] {
            if layer.contains_key(s) {
                continue;
            }
            let n = pending.get_mut(s).expect("known node");
            *n = n.saturating_sub(1);
            if *n == 0 {
                let sl = preds[s]
                    .iter()
                    .filter_map(|p| layer.get(p))
                    .max()
                    .map_or(0, |x| x + 1);
                ready.insert((sl, *s));
            }
        }
    }
    order
}

/// Normal form of a diagram `n -> m` as a state on `n + m` wires, folding
/// node normal forms together with tensor products and self-plugs.
pub fn normalize(d: &Diagram) -> Result<NormalForm, NormalFormError> {
    normalize_with_cap(d, DEFAULT_WIRE_CAP)
}

pub fn normalize_with_cap(d: &Diagram, cap: usize) -> Result<NormalForm, NormalFormError> {
    let wires = d.n_inputs() + d.n_outputs();
    if wires > cap {
        return Err(NormalFormError::TooLarge { wires, cap });
    }
    let state = bend_to_state(d);
    // label of each open wire of the running normal form: the port at its
    // loose end
    let mut labels: Vec<Port> = Vec::new();
    let mut nf = scalar_nf(C64::new(1.0, 0.0));

    // bare boundary wires become caps
    for (a, b) in state.edges() {
        if a.is_boundary() && b.is_boundary() {
            nf = nf_tensor(&nf, &generator_nf(GeneratorKind::Cap));
            labels.push(a);
            labels.push(b);
        }
    }

    for id in layer_order(&state) {
        let node = state.node(id).expect("ordered node exists");
        let deg = node.degree();
        nf = nf_tensor(&nf, &node_nf(node.kind, deg));
        labels.extend((0..deg).map(|k| Port::Node(id, k)));
        // plug every new port whose partner is already an open wire
        for k in 0..deg {
            let here = Port::Node(id, k);
            let there = state.partner(here).expect("wired port");
            let (Some(p), Some(q)) = (
                labels.iter().position(|l| *l == here),
                labels.iter().position(|l| *l == there),
            ) else {
                continue;
            };
            let (p, q) = (p.min(q), p.max(q));
            nf = nf_self_plug(&nf, p, q)?;
            labels.remove(q);
            labels.remove(p);
        }
        if nf.m > cap {
            return Err(NormalFormError::TooLarge { wires: nf.m, cap });
        }
    }

    // every remaining label ends on an output slot of the bent state
    let slot = |l: &Port| match l {
        Port::Output(j) => *j,
        other => match state.partner(*other) {
            Some(Port::Output(j)) => j,
            p => unreachable!("open wire {other} ends at {p:?}"),
        },
    };
    let perm: Vec<usize> = labels.iter().map(slot).collect();
    Ok(permute_wires(&nf, &perm))
}
