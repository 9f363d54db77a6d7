//! The axiom set, for arbitrary complex parameters `a`, `b`.

use crate::diagram::{Diagram, XPhase};
use crate::gadgets::{and_gate, copy, par, seq, w_node};

use super::{id, one, re, x, z, Origin, RewriteRule};

fn axiom(
    name: &str,
    arity: usize,
    lhs: impl Fn(&[num_complex::Complex64]) -> Diagram + Send + Sync + 'static,
    rhs: impl Fn(&[num_complex::Complex64]) -> Diagram + Send + Sync + 'static,
) -> RewriteRule {
    RewriteRule::new(name, Origin::Axiom, arity, lhs, rhs)
}

fn fixed(name: &str, lhs: Diagram, rhs: Diagram) -> RewriteRule {
    RewriteRule::constant(name, Origin::Axiom, lhs, rhs)
}

pub fn axioms() -> Vec<RewriteRule> {
    use XPhase::{Pi, Zero};
    vec![
        // spider fusion: parameters multiply
        axiom(
            "S1",
            2,
            |p| seq(&[par(&[z(1, 2, p[0]), id(1)]), par(&[id(1), z(2, 2, p[1])])]),
            |p| z(2, 3, p[0] * p[1]),
        ),
        fixed("S2", z(1, 1, one()), id(1)),
        fixed("S3", z(0, 2, one()), Diagram::cap()),
        // the red zero state deletes into any green effect
        axiom(
            "Ept",
            1,
            |p| seq(&[x(0, 1, Zero), z(1, 0, p[0])]),
            |_| Diagram::empty(),
        ),
        fixed(
            "B1",
            seq(&[x(0, 1, Zero), copy()]),
            par(&[x(0, 1, Zero), x(0, 1, Zero)]),
        ),
        fixed(
            "B2",
            seq(&[x(2, 1, Zero), copy()]),
            seq(&[
                par(&[copy(), copy()]),
                par(&[id(1), Diagram::swap(), id(1)]),
                par(&[x(2, 1, Zero), x(2, 1, Zero)]),
            ]),
        ),
        fixed(
            "B3",
            seq(&[x(1, 1, Pi), copy()]),
            seq(&[copy(), par(&[x(1, 1, Pi), x(1, 1, Pi)])]),
        ),
        fixed(
            "Brk",
            seq(&[
                Diagram::triangle_inv(),
                copy(),
                par(&[Diagram::triangle(), Diagram::triangle()]),
            ]),
            seq(&[
                x(1, 1, Pi),
                crate::diagram::flip(&and_gate(2)),
                par(&[x(1, 1, Pi), x(1, 1, Pi)]),
            ]),
        ),
        fixed(
            "Bas0",
            seq(&[x(0, 1, Zero), Diagram::triangle()]),
            x(0, 1, Zero),
        ),
        fixed(
            "Bas1",
            seq(&[x(0, 1, Pi), Diagram::triangle()]),
            z(0, 1, one()),
        ),
        axiom(
            "Suc",
            1,
            |p| seq(&[Diagram::triangle(), z(1, 0, p[0])]),
            |p| z(1, 0, p[0] + 1.0),
        ),
        fixed(
            "Inv",
            seq(&[Diagram::triangle(), Diagram::triangle_inv()]),
            id(1),
        ),
        fixed(
            "Zero",
            z(1, 1, re(0.0)),
            par(&[x(1, 0, Zero), x(0, 1, Zero)]),
        ),
        // Euler-style decomposition of the Hadamard box
        fixed(
            "EU",
            Diagram::hadamard(),
            seq(&[
                Diagram::triangle(),
                z(1, 1, re(-2.0)),
                x(1, 1, Pi),
                Diagram::triangle(),
                x(1, 1, Pi),
            ]),
        ),
        fixed("Sym", seq(&[w_node(), Diagram::swap()]), w_node()),
        fixed(
            "Aso",
            seq(&[w_node(), par(&[w_node(), id(1)])]),
            seq(&[w_node(), par(&[id(1), w_node()])]),
        ),
        axiom(
            "Pcy",
            1,
            |p| seq(&[w_node(), par(&[z(1, 1, p[0]), z(1, 1, p[0])])]),
            |p| seq(&[z(1, 1, p[0]), w_node()]),
        ),
    ]
}
