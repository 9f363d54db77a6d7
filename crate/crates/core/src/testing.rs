//! Random diagram corpora for property tests and benchmarks: small random
//! diagrams, semantically equal variants produced by sound local rewrites,
//! and perturbed copies that usually differ.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::diagram::{Diagram, NodeKind, Port, XPhase};
use crate::gadgets::{par, seq};
use crate::rewrite::{default_budget, simplify};
use crate::rules::rule_by_name;

/// Random parameter: mostly uniform in the disk of radius 2, sometimes one
/// of the special values `0, 1, -1, i`.
pub fn random_phase<R: Rng>(rng: &mut R) -> C64 {
    if rng.gen_bool(0.15) {
        *[
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 1.0),
        ]
        .choose(rng)
        .expect("non-empty")
    } else {
        C64::from_polar(2.0 * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
    }
}

fn random_tau<R: Rng>(rng: &mut R) -> XPhase {
    if rng.gen_bool(0.5) {
        XPhase::Zero
    } else {
        XPhase::Pi
    }
}

/// One random generator `k -> l` that keeps the bundle width within `max`.
fn random_gate<R: Rng>(rng: &mut R, width: usize, max: usize) -> Diagram {
    loop {
        let g = match rng.gen_range(0..12) {
            0 if width >= 1 => Diagram::hadamard(),
            1 if width >= 1 => Diagram::triangle(),
            2 if width >= 1 => Diagram::triangle_inv(),
            3 if width >= 1 => Diagram::z_spider(1, 1, random_phase(rng)),
            4 if width >= 1 && width < max => {
                if rng.gen_bool(0.5) {
                    Diagram::z_spider(1, 2, random_phase(rng))
                } else {
                    Diagram::x_spider(1, 2, random_tau(rng))
                }
            }
            5 if width >= 2 => {
                if rng.gen_bool(0.5) {
                    Diagram::z_spider(2, 1, random_phase(rng))
                } else {
                    Diagram::x_spider(2, 1, random_tau(rng))
                }
            }
            6 if width >= 2 => Diagram::z_spider(2, 2, random_phase(rng)),
            7 if width >= 2 => Diagram::swap(),
            8 if width + 2 <= max => Diagram::cap(),
            9 if width >= 2 => Diagram::cup(),
            10 if width < max => Diagram::z_spider(0, 1, random_phase(rng)),
            11 if width >= 1 => Diagram::z_spider(1, 0, random_phase(rng)),
            _ => continue,
        };
        return g;
    }
}

fn place<R: Rng>(rng: &mut R, width: usize, gate: &Diagram) -> Diagram {
    let k = gate.n_inputs();
    let before = rng.gen_range(0..=width - k);
    par(&[
        Diagram::identity(before),
        gate.clone(),
        Diagram::identity(width - k - before),
    ])
}

/// A random diagram with `n + m <= max_wires` boundary wires built from at
/// most `max_generators` generators (a red spider counts as one).
pub fn random_diagram<R: Rng>(rng: &mut R, max_wires: usize, max_generators: usize) -> Diagram {
    assert!(max_wires >= 1 && max_generators >= 2);
    let n = rng.gen_range(0..=max_wires.min(2));
    let mut width = n;
    let mut d = Diagram::identity(n);
    let count = rng.gen_range(1..max_generators);
    for _ in 0..count {
        let gate = random_gate(rng, width, max_wires);
        d = seq(&[d, place(rng, width, &gate)]);
        width = width - gate.n_inputs() + gate.n_outputs();
    }
    if n + width > max_wires {
        let gate = if width >= 2 {
            Diagram::cup()
        } else {
            Diagram::z_spider(1, 0, random_phase(rng))
        };
        d = seq(&[d, place(rng, width, &gate)]);
    }
    d
}

/// Copies `repl` into `d`, wiring its input slots to `ins` and its output
/// slots to `outs` (both must be free ports of `d`).
fn embed(d: &mut Diagram, repl: &Diagram, ins: &[Port], outs: &[Port]) {
    let ids: BTreeMap<usize, usize> = repl
        .nodes()
        .map(|(id, n)| (id, d.insert_node(n.kind, n.n_in, n.n_out)))
        .collect();
    let map = |p: Port| match p {
        Port::Input(i) => ins[i],
        Port::Output(j) => outs[j],
        Port::Node(id, k) => Port::Node(ids[&id], k),
    };
    for (a, b) in repl.edges() {
        d.link_unchecked(map(a), map(b));
    }
}

/// Wire identities: each interprets as the identity on one wire.
fn wire_identity<R: Rng>(rng: &mut R) -> Diagram {
    match rng.gen_range(0..4) {
        0 => Diagram::z_spider(1, 1, C64::new(1.0, 0.0)),
        1 => seq(&[Diagram::triangle(), Diagram::triangle_inv()]),
        2 => par(&[
            seq(&[Diagram::hadamard(), Diagram::hadamard()]),
            Diagram::scalar(C64::new(0.5, 0.0)),
        ]),
        _ => {
            let a = loop {
                let a = random_phase(rng);
                if a.norm() > 0.25 {
                    break a;
                }
            };
            seq(&[Diagram::z_spider(1, 1, a), Diagram::z_spider(1, 1, a.inv())])
        }
    }
}

fn insert_on_edge<R: Rng>(rng: &mut R, d: &mut Diagram) -> bool {
    let edges: Vec<(Port, Port)> = d.edges().collect();
    let Some(&(a, b)) = edges.choose(rng) else {
        return false;
    };
    d.unlink(a);
    embed(d, &wire_identity(rng), &[a], &[b]);
    true
}

/// Replaces a Hadamard box by its Euler decomposition.
fn expand_hadamard<R: Rng>(rng: &mut R, d: &mut Diagram) -> bool {
    let hs: Vec<usize> = d
        .nodes()
        .filter(|(_, n)| n.kind == NodeKind::H)
        .map(|(id, _)| id)
        .collect();
    let Some(&id) = hs.choose(rng) else {
        return false;
    };
    if d.partner(Port::Node(id, 0)) == Some(Port::Node(id, 1)) {
        return false;
    }
    let (_, euler) = rule_by_name("EU")
        .expect("EU axiom exists")
        .instantiate(&[])
        .expect("EU takes no parameters");
    let partners = d.remove_node(id);
    embed(d, &euler, &partners[..1], &partners[1..]);
    true
}

/// Splits a green spider into two connected spiders whose parameters
/// multiply to the original.
fn unfuse_spider<R: Rng>(rng: &mut R, d: &mut Diagram) -> bool {
    let zs: Vec<(usize, C64, usize, usize)> = d
        .nodes()
        .filter_map(|(id, n)| n.kind.phase().map(|a| (id, a, n.n_in, n.n_out)))
        .filter(|(id, _, _, _)| d.neighbours(*id).iter().all(|(_, p)| p.node() != Some(*id)))
        .collect();
    let Some(&(id, a, n_in, n_out)) = zs.choose(rng) else {
        return false;
    };
    let deg = n_in + n_out;
    let partners = d.remove_node(id);
    let moved: Vec<bool> = (0..deg).map(|_| rng.gen_bool(0.5)).collect();
    let b = if a.norm() > 0.25 && rng.gen_bool(0.5) {
        random_phase(rng)
    } else {
        C64::new(1.0, 0.0)
    };
    let b = if b.norm() < 1e-3 {
        C64::new(1.0, 0.0)
    } else {
        b
    };
    // kept legs stay on `left` (with parameter a / b), moved legs go to `right`
    let kept_in = (0..n_in).filter(|&k| !moved[k]).count();
    let kept = (0..deg).filter(|&k| !moved[k]).count();
    let left = d.insert_node(NodeKind::Z(a / b), kept_in, kept + 1 - kept_in);
    let right = d.insert_node(NodeKind::Z(b), 1, deg - kept);
    d.link_unchecked(Port::Node(left, kept), Port::Node(right, 0));
    let (mut l, mut r) = (0, 1);
    for k in 0..deg {
        let port = if moved[k] {
            r += 1;
            Port::Node(right, r - 1)
        } else {
            l += 1;
            Port::Node(left, l - 1)
        };
        d.link_unchecked(port, partners[k]);
    }
    true
}

/// A diagram equal to `d`, obtained by one to three sound local rewrites
/// (wire identities, Euler expansion, spider splitting, simplification).
pub fn equivalent_variant<R: Rng>(rng: &mut R, d: &Diagram) -> Diagram {
    let mut out = d.clone();
    let moves = rng.gen_range(1..=3);
    let mut done = 0;
    for _ in 0..20 {
        if done == moves {
            break;
        }
        let ok = match rng.gen_range(0..4) {
            0 => insert_on_edge(rng, &mut out),
            1 => expand_hadamard(rng, &mut out),
            2 => unfuse_spider(rng, &mut out),
            _ => {
                out = simplify(&out, default_budget(&out)).diagram;
                true
            }
        };
        done += usize::from(ok);
    }
    debug_assert!(out.validate().is_ok());
    out
}

/// A copy of `d` with one generator changed: a green parameter moved, a
/// triangle inverted or a box swapped. The result usually, but not always,
/// has a different interpretation. Diagrams without nodes get a scalar 2.
pub fn perturbed<R: Rng>(rng: &mut R, d: &Diagram) -> Diagram {
    let mut out = d.clone();
    let ids: Vec<usize> = out.nodes().map(|(id, _)| id).collect();
    let Some(&id) = ids.choose(rng) else {
        return par(&[out, Diagram::scalar(C64::new(2.0, 0.0))]);
    };
    let node = out.node_mut(id).expect("chosen node exists");
    node.kind = match node.kind {
        NodeKind::Z(a) => {
            let delta = C64::from_polar(rng.gen_range(0.1..1.0), 2.0 * PI * rng.gen::<f64>());
            NodeKind::Z(a + delta)
        }
        NodeKind::H => NodeKind::Triangle,
        NodeKind::Triangle => NodeKind::TriangleInv,
        NodeKind::TriangleInv => NodeKind::H,
    };
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// Equal by construction.
    Rewritten,
    /// One generator changed.
    Perturbed,
}

#[derive(Clone, Debug)]
pub struct Pair {
    pub left: Diagram,
    pub right: Diagram,
    pub kind: PairKind,
}

/// `count` pairs over diagrams with at most 3 boundary wires and 8
/// generators, alternating rewritten and perturbed pairs.
pub fn corpus(seed: u64, count: usize) -> Vec<Pair> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let left = random_diagram(&mut rng, 3, 8);
            let (right, kind) = if i % 2 == 0 {
                (equivalent_variant(&mut rng, &left), PairKind::Rewritten)
            } else {
                (perturbed(&mut rng, &left), PairKind::Perturbed)
            };
            Pair { left, right, kind }
        })
        .collect()
}
