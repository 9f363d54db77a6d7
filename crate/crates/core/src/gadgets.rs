//! Derived gadgets: classical gates, triangles with parameters and the
//! elementary row-operation diagrams used by the normal form.
//!
//! Subsets of wires are given as bit indices: on an `m`-wire boundary, bit
//! `i` is carried by the wire at position `m - 1 - i`.

use num_complex::Complex64 as C64;

use crate::diagram::{compose, tensor, Diagram, NodeKind, Port, XPhase};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Sequential composition of a non-empty chain. Panics on arity mismatch.
pub fn seq(parts: &[Diagram]) -> Diagram {
    let mut it = parts.iter();
    let first = it.next().expect("non-empty chain").clone();
    it.fold(first, |acc, d| {
        compose(&acc, d).expect("chain arities agree")
    })
}

/// Tensor product of a list; the empty list gives the empty diagram.
pub fn par(parts: &[Diagram]) -> Diagram {
    parts
        .iter()
        .fold(Diagram::empty(), |acc, d| tensor(&acc, d))
}

/// Applies a `k -> k` gate to the given wire positions of a `width`-wire
/// bundle; `wires[i]` receives the gate's slot `i`.
pub fn on(width: usize, gate: &Diagram, wires: &[usize]) -> Diagram {
    let k = wires.len();
    assert_eq!(gate.n_inputs(), k);
    assert_eq!(gate.n_outputs(), k);
    let mut order: Vec<usize> = wires.to_vec();
    order.extend((0..width).filter(|w| !wires.contains(w)));
    assert_eq!(order.len(), width, "distinct wire positions");
    let mut perm = vec![0; width];
    for (q, &w) in order.iter().enumerate() {
        perm[w] = q;
    }
    let gather = Diagram::permutation(&perm);
    let scatter = Diagram::permutation(&order);
    seq(&[gather, tensor(gate, &Diagram::identity(width - k)), scatter])
}

/// Incremental construction of circuit-like diagrams, one gate at a time.
pub struct Circuit {
    d: Diagram,
    ends: Vec<Port>,
}

impl Circuit {
    /// `n` open wires starting at the inputs.
    pub fn new(n: usize) -> Self {
        Circuit {
            d: Diagram::unwired(n, 0),
            ends: (0..n).map(Port::Input).collect(),
        }
    }

    /// `m` wires starting in the state `|1..1>`, prepared by red `pi` states.
    pub fn ones(m: usize) -> Self {
        let mut c = Circuit::new(0);
        for _ in 0..m {
            let end = c.x_spider_ports(XPhase::Pi, 0, 1).1[0];
            c.ends.push(end);
        }
        c
    }

    pub fn width(&self) -> usize {
        self.ends.len()
    }

    fn x_spider_ports(&mut self, tau: XPhase, n: usize, m: usize) -> (Vec<Port>, Vec<Port>) {
        let z = self.d.insert_node(NodeKind::Z(tau.green_phase()), n, m);
        let mut ins = Vec::new();
        for i in 0..n {
            let h = self.d.insert_node(NodeKind::H, 1, 1);
            self.d.link_unchecked(Port::Node(h, 1), Port::Node(z, i));
            ins.push(Port::Node(h, 0));
        }
        let mut outs = Vec::new();
        for j in 0..m {
            let h = self.d.insert_node(NodeKind::H, 1, 1);
            self.d
                .link_unchecked(Port::Node(z, n + j), Port::Node(h, 0));
            outs.push(Port::Node(h, 1));
        }
        self.d.insert_node(NodeKind::Z(C64::new(-0.5, 0.0)), 0, 0);
        (ins, outs)
    }

    pub fn unary(&mut self, wire: usize, kind: NodeKind) -> &mut Self {
        let v = self.d.insert_node(kind, 1, 1);
        self.d.link_unchecked(self.ends[wire], Port::Node(v, 0));
        self.ends[wire] = Port::Node(v, 1);
        self
    }

    pub fn x_pi(&mut self, wire: usize) -> &mut Self {
        let (ins, outs) = self.x_spider_ports(XPhase::Pi, 1, 1);
        self.d.link_unchecked(self.ends[wire], ins[0]);
        self.ends[wire] = outs[0];
        self
    }

    /// Inserts a copy spider on `wire` and returns its dangling branch.
    pub fn copy(&mut self, wire: usize) -> Port {
        let z = self.d.insert_node(NodeKind::Z(one()), 1, 2);
        self.d.link_unchecked(self.ends[wire], Port::Node(z, 0));
        self.ends[wire] = Port::Node(z, 1);
        Port::Node(z, 2)
    }

    /// XORs the dangling end `from` into `wire`.
    pub fn merge(&mut self, wire: usize, from: Port) -> &mut Self {
        let (ins, outs) = self.x_spider_ports(XPhase::Zero, 2, 1);
        self.d.link_unchecked(self.ends[wire], ins[0]);
        self.d.link_unchecked(from, ins[1]);
        self.ends[wire] = outs[0];
        self
    }

    /// Passes a dangling end through a fresh `1 -> 1` node.
    pub fn through(&mut self, from: Port, kind: NodeKind) -> Port {
        let v = self.d.insert_node(kind, 1, 1);
        self.d.link_unchecked(from, Port::Node(v, 0));
        Port::Node(v, 1)
    }

    /// Adds a green spider fed by the given dangling ends; returns its
    /// output ports.
    pub fn spider(&mut self, a: C64, inputs: &[Port], n_out: usize) -> Vec<Port> {
        let z = self.d.insert_node(NodeKind::Z(a), inputs.len(), n_out);
        for (k, p) in inputs.iter().enumerate() {
            self.d.link_unchecked(*p, Port::Node(z, k));
        }
        (0..n_out)
            .map(|j| Port::Node(z, inputs.len() + j))
            .collect()
    }

    /// Splices a `k -> k` gate onto the given wires. The gate must not
    /// contain caps or cups.
    pub fn apply(&mut self, wires: &[usize], gate: &Diagram) -> &mut Self {
        assert_eq!(gate.n_inputs(), wires.len());
        assert_eq!(gate.n_outputs(), wires.len());
        let mut remap = std::collections::BTreeMap::new();
        for (id, node) in gate.nodes() {
            remap.insert(id, self.d.insert_node(node.kind, node.n_in, node.n_out));
        }
        let rename = |p: Port| match p {
            Port::Node(id, k) => Port::Node(remap[&id], k),
            other => other,
        };
        let old_ends = self.ends.clone();
        let mut new_ends = self.ends.clone();
        for (a, b) in gate.edges() {
            match (rename(a), rename(b)) {
                (Port::Input(i), Port::Output(j)) | (Port::Output(j), Port::Input(i)) => {
                    new_ends[wires[j]] = old_ends[wires[i]];
                }
                (Port::Input(i), p) | (p, Port::Input(i)) if p.node().is_some() => {
                    self.d.link_unchecked(old_ends[wires[i]], p);
                }
                (Port::Output(j), p) | (p, Port::Output(j)) if p.node().is_some() => {
                    new_ends[wires[j]] = p;
                }
                (p, q) if p.node().is_some() && q.node().is_some() => {
                    self.d.link_unchecked(p, q);
                }
                _ => panic!("gate contains a cap or cup"),
            }
        }
        self.ends = new_ends;
        self
    }

    pub fn finish(mut self) -> Diagram {
        self.d.set_outputs(self.ends.len());
        for (j, p) in self.ends.iter().enumerate() {
            self.d.link_unchecked(*p, Port::Output(j));
        }
        self.d.validate().expect("circuit is well formed");
        self.d
    }
}

pub fn copy() -> Diagram {
    Diagram::z_spider(1, 2, one())
}

/// Classical AND of `k` bits: `Ti . Z(1; k, 1) . T^k`.
pub fn and_gate(k: usize) -> Diagram {
    let mut c = Circuit::new(k);
    let ins: Vec<Port> = (0..k)
        .map(|w| {
            let end = c.ends[w];
            c.through(end, NodeKind::Triangle)
        })
        .collect();
    let out = c.spider(one(), &ins, 1)[0];
    let out = c.through(out, NodeKind::TriangleInv);
    c.ends = vec![out];
    c.finish()
}

/// Controlled-NOT on a `width`-wire bundle (wire positions).
pub fn cnot(width: usize, control: usize, target: usize) -> Diagram {
    assert_ne!(control, target);
    let mut c = Circuit::new(width);
    let branch = c.copy(control);
    c.merge(target, branch);
    c.finish()
}

/// The `W` node `1 -> 2`: `|0> -> |00>`, `|1> -> |01> + |10>`.
pub fn w_node() -> Diagram {
    seq(&[
        copy(),
        tensor(&Diagram::identity(1), &Diagram::triangle()),
        cnot(2, 1, 0),
    ])
}

/// Triangle with parameter: `[[1, a], [0, 1]]`.
pub fn triangle_with(a: C64) -> Diagram {
    seq(&[
        w_node(),
        tensor(&Diagram::z_spider(1, 0, a), &Diagram::identity(1)),
    ])
}

/// `|1..1>` on `m` wires.
pub fn ones_state(m: usize) -> Diagram {
    Circuit::ones(m).finish()
}

/// The `0 -> 0` diagram `X(pi; 0, 1) ; Z(a; 1, 0)` with value `a`.
pub fn scalar_nf_diagram(a: C64) -> Diagram {
    compose(
        &Diagram::x_spider(0, 1, XPhase::Pi),
        &Diagram::z_spider(1, 0, a),
    )
    .unwrap()
}

fn position(m: usize, bit: usize) -> usize {
    assert!(bit < m, "bit index {bit} out of range for {m} wires");
    m - 1 - bit
}

fn controls(c: &mut Circuit, m: usize, negated: &[usize]) -> Vec<Port> {
    (0..m)
        .map(|p| {
            let neg = negated.contains(&(m - 1 - p));
            if neg {
                c.x_pi(p);
            }
            let branch = c.copy(p);
            if neg {
                c.x_pi(p);
            }
            c.through(branch, NodeKind::Triangle)
        })
        .collect()
}

/// Generalised row addition on `m` wires: adds `a` times the column
/// selected by the controls (bits in `negated` must be 0, all others 1) to
/// the row obtained by flipping the bits in `subset`.
pub fn row_addition_gen(m: usize, a: C64, subset: &[usize], negated: &[usize]) -> Diagram {
    let mut c = Circuit::new(m);
    let ins = controls(&mut c, m, negated);
    let outs = c.spider(a, &ins, subset.len());
    for (bit, out) in subset.iter().zip(outs) {
        c.merge(position(m, *bit), out);
    }
    c.finish()
}

/// Row addition `I + a e_j e_last^T` with `j = 2^m - 1 - sum_{i in S} 2^i`.
pub fn row_addition(m: usize, a: C64, subset: &[usize]) -> Diagram {
    row_addition_gen(m, a, subset, &[])
}

/// Generalised row multiplication: scales the basis vector selected by the
/// controls by `a`.
pub fn row_multiplication_gen(m: usize, a: C64, negated: &[usize]) -> Diagram {
    let mut c = Circuit::new(m);
    let ins = controls(&mut c, m, negated);
    c.spider(a - 1.0, &ins, 0);
    c.finish()
}

/// `diag(1, .., 1, a)` on `m` wires.
pub fn row_multiplication(m: usize, a: C64) -> Diagram {
    row_multiplication_gen(m, a, &[])
}

/// Bit mask of a subset of bit indices.
pub fn mask(bits: &[usize]) -> usize {
    bits.iter().fold(0, |acc, b| acc | (1 << b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{interpret, matrices_equal, Matrix};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_matrix(d: &Diagram, expected: &Matrix) {
        let got = interpret(d).unwrap();
        assert!(
            matrices_equal(&got, expected, 1e-9),
            "got\n{got}expected\n{expected}"
        );
    }

    fn addition_oracle(m: usize, a: C64, subset: &[usize], negated: &[usize]) -> Matrix {
        let dim = 1 << m;
        let col = (dim - 1) & !mask(negated);
        let row = col ^ mask(subset);
        let mut e = Matrix::identity(dim);
        e.set(row, col, e.get(row, col) + a);
        e
    }

    #[test]
    fn and_gate_truth_table() {
        for k in 1..4 {
            let mut e = Matrix::zeros(2, 1 << k);
            for x in 0..1usize << k {
                let r = usize::from(x == (1 << k) - 1);
                e.set(r, x, c(1.0, 0.0));
            }
            assert_matrix(&and_gate(k), &e);
        }
    }

    #[test]
    fn cnot_flips_target() {
        let e = Matrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_matrix(&cnot(2, 0, 1), &e);
    }

    #[test]
    fn w_node_matrix() {
        let e = Matrix::from_real(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]]);
        assert_matrix(&w_node(), &e);
    }

    #[test]
    fn parametrised_triangle() {
        let a = c(0.3, -1.2);
        let e = Matrix::from_rows(&[vec![c(1.0, 0.0), a], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        assert_matrix(&triangle_with(a), &e);
    }

    #[test]
    fn on_routes_gates() {
        let h = Matrix::from_real(&[&[1.0, 1.0], &[1.0, -1.0]]);
        let i = Matrix::identity(2);
        assert_matrix(&on(3, &Diagram::hadamard(), &[1]), &i.kron(&h).kron(&i));
        // cnot with control on the right wire, built two ways
        assert_matrix(
            &on(2, &cnot(2, 0, 1), &[1, 0]),
            &interpret(&cnot(2, 1, 0)).unwrap(),
        );
    }

    #[test]
    fn row_additions_match_oracle() {
        let a = c(0.7, 0.4);
        for m in 1..4 {
            for s in 0..1usize << m {
                let subset: Vec<usize> = (0..m).filter(|b| s >> b & 1 == 1).collect();
                assert_matrix(
                    &row_addition(m, a, &subset),
                    &addition_oracle(m, a, &subset, &[]),
                );
            }
        }
        assert_matrix(
            &row_addition_gen(3, a, &[0, 2], &[1]),
            &addition_oracle(3, a, &[0, 2], &[1]),
        );
        assert_matrix(
            &row_addition_gen(2, a, &[1], &[1]),
            &addition_oracle(2, a, &[1], &[1]),
        );
    }

    #[test]
    fn row_multiplications_match_oracle() {
        let a = c(-2.0, 0.5);
        for m in 0..4 {
            let mut e = Matrix::identity(1 << m);
            let last = (1 << m) - 1;
            e.set(last, last, a);
            assert_matrix(&row_multiplication(m, a), &e);
        }
        let mut e = Matrix::identity(4);
        e.set(1, 1, a);
        assert_matrix(&row_multiplication_gen(2, a, &[1]), &e);
    }

    #[test]
    fn ones_state_and_scalar() {
        let v = interpret(&ones_state(2)).unwrap();
        assert_eq!(
            v.column(0),
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
        );
        let s = interpret(&scalar_nf_diagram(c(2.0, 3.0))).unwrap();
        assert!((s.get(0, 0) - c(2.0, 3.0)).norm() < 1e-12);
    }
}
