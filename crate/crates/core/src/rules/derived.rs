//! Equalities derived from the axioms, checked semantically.
//!
//! Row operations are written `G(m, a, S, N)` (row addition with negated
//! controls `N`) and `Mg(m, a, N)` (row multiplication with negated
//! controls), see [`crate::gadgets`]. `X_B` is a red `pi` on the wires of the
//! bit set `B`.

use num_complex::Complex64 as C64;

use crate::diagram::{flip, Diagram, XPhase};
use crate::gadgets::{
    and_gate, cnot, copy, ones_state, par, row_addition_gen as g, row_multiplication_gen as mg,
    seq, triangle_with, w_node,
};

use super::{id, one, re, sc, x, z, Domain, Origin, RewriteRule};

fn derived(
    name: &str,
    label: &str,
    arity: usize,
    lhs: impl Fn(&[C64]) -> Diagram + Send + Sync + 'static,
    rhs: impl Fn(&[C64]) -> Diagram + Send + Sync + 'static,
) -> RewriteRule {
    RewriteRule::new(name, Origin::Derived(label.to_string()), arity, lhs, rhs)
}

fn fixed(name: &str, label: &str, lhs: Diagram, rhs: Diagram) -> RewriteRule {
    RewriteRule::constant(name, Origin::Derived(label.to_string()), lhs, rhs)
}

/// `A ; B = B ; A` for two parameterised `m -> m` diagrams.
fn commute(
    name: &str,
    label: &str,
    a: impl Fn(C64) -> Diagram + Send + Sync + Clone + 'static,
    b: impl Fn(C64) -> Diagram + Send + Sync + Clone + 'static,
) -> RewriteRule {
    let (a2, b2) = (a.clone(), b.clone());
    derived(
        name,
        label,
        2,
        move |p| seq(&[a(p[0]), b(p[1])]),
        move |p| seq(&[b2(p[1]), a2(p[0])]),
    )
}

/// Red `pi` on the wires carrying the given bits.
fn xs(m: usize, bits: &[usize]) -> Diagram {
    let parts: Vec<Diagram> = (0..m)
        .map(|pos| {
            if bits.contains(&(m - 1 - pos)) {
                x(1, 1, XPhase::Pi)
            } else {
                id(1)
            }
        })
        .collect();
    par(&parts)
}

fn subsets(bits: &[usize]) -> Vec<Vec<usize>> {
    (0..1usize << bits.len())
        .map(|s| {
            bits.iter()
                .enumerate()
                .filter(|(k, _)| s >> k & 1 == 1)
                .map(|(_, b)| *b)
                .collect()
        })
        .collect()
}

fn scalar_rules() -> Vec<RewriteRule> {
    use XPhase::Pi;
    vec![
        derived(
            "Sca",
            "scalars multiply",
            2,
            |p| par(&[sc(p[0]), sc(p[1])]),
            |p| sc(p[0] * p[1]),
        ),
        fixed("Zos", "zero scalar", sc(re(0.0)), x(0, 0, Pi)),
        derived(
            "Sml",
            "scalar absorbed by the one state",
            1,
            |p| par(&[sc(p[0]), x(0, 1, Pi)]),
            |p| seq(&[x(0, 1, Pi), z(1, 1, p[0])]),
        ),
        fixed(
            "Siv",
            "inverse scalars cancel",
            par(&[sc(re(0.5)), z(0, 0, one())]),
            Diagram::empty(),
        ),
    ]
}

fn spider_rules() -> Vec<RewriteRule> {
    use XPhase::{Pi, Zero};
    let colour_change = |tau: XPhase| {
        seq(&[
            Diagram::hadamard(),
            z(1, 2, tau.green_phase()),
            par(&[Diagram::hadamard(), Diagram::hadamard()]),
        ])
    };
    vec![
        fixed(
            "H2",
            "Hadamard squares to two",
            seq(&[Diagram::hadamard(), Diagram::hadamard()]),
            par(&[sc(re(2.0)), id(1)]),
        ),
        fixed(
            "H",
            "colour change",
            colour_change(Zero),
            par(&[sc(re(2.0)), x(1, 2, Zero)]),
        ),
        fixed(
            "H.pi",
            "colour change",
            colour_change(Pi),
            par(&[sc(re(2.0)), x(1, 2, Pi)]),
        ),
        fixed(
            "S1x",
            "red spider fusion",
            seq(&[par(&[x(1, 2, Pi), id(1)]), par(&[id(1), x(2, 2, Pi)])]),
            x(2, 3, Zero),
        ),
        fixed(
            "S1x.pi",
            "red spider fusion",
            seq(&[par(&[x(1, 2, Zero), id(1)]), par(&[id(1), x(2, 2, Pi)])]),
            x(2, 3, Pi),
        ),
        fixed(
            "Hopf",
            "Hopf law",
            seq(&[copy(), x(2, 1, Zero)]),
            par(&[z(1, 0, one()), x(0, 1, Zero)]),
        ),
        fixed(
            "Hopf.pi",
            "Hopf law with a red pi",
            seq(&[copy(), x(2, 1, Pi)]),
            par(&[z(1, 0, one()), x(0, 1, Pi)]),
        ),
        derived(
            "Pic",
            "pi commutation through a green spider",
            1,
            |p| seq(&[x(1, 1, Pi), z(1, 3, p[0])]),
            |p| {
                seq(&[
                    z(1, 3, one() / p[0]),
                    par(&[sc(p[0]), x(1, 1, Pi), x(1, 1, Pi), x(1, 1, Pi)]),
                ])
            },
        )
        .with_domain(Domain::NonZero(vec![0])),
        derived(
            "Pic1",
            "pi commutation through a phase",
            1,
            |p| seq(&[x(1, 1, Pi), z(1, 1, p[0])]),
            |p| seq(&[z(1, 1, one() / p[0]), par(&[sc(p[0]), x(1, 1, Pi)])]),
        )
        .with_domain(Domain::NonZero(vec![0])),
        fixed(
            "Zero'",
            "zero spider disconnects",
            z(1, 2, re(0.0)),
            par(&[x(1, 0, Zero), x(0, 1, Zero), x(0, 1, Zero)]),
        ),
        fixed(
            "H-pi",
            "green pi through a Hadamard",
            seq(&[Diagram::hadamard(), z(1, 1, re(-1.0))]),
            seq(&[x(1, 1, Pi), Diagram::hadamard()]),
        ),
    ]
}

fn triangle_rules() -> Vec<RewriteRule> {
    use XPhase::{Pi, Zero};
    vec![
        fixed(
            "Bas1'",
            "inverse triangle on the plus state",
            seq(&[z(0, 1, one()), Diagram::triangle_inv()]),
            x(0, 1, Pi),
        ),
        fixed(
            "Brk1'",
            "triangles between copy and merge",
            seq(&[
                copy(),
                par(&[Diagram::triangle(), Diagram::triangle()]),
                z(2, 1, one()),
            ]),
            Diagram::triangle(),
        ),
        fixed(
            "And-diag",
            "AND of a copied bit",
            seq(&[copy(), and_gate(2)]),
            id(1),
        ),
        derived(
            "AD'",
            "addition of green states",
            2,
            |p| seq(&[par(&[z(0, 1, p[0]), z(0, 1, p[1])]), flip(&w_node())]),
            |p| z(0, 1, p[0] + p[1]),
        ),
        derived(
            "Tri-add",
            "parametrised triangles add",
            2,
            |p| seq(&[triangle_with(p[0]), triangle_with(p[1])]),
            |p| triangle_with(p[0] + p[1]),
        ),
        fixed(
            "Ivt",
            "inverse triangle is the minus-one triangle",
            Diagram::triangle_inv(),
            triangle_with(re(-1.0)),
        ),
        fixed(
            "Tri-double",
            "two triangles",
            seq(&[Diagram::triangle(), Diagram::triangle()]),
            triangle_with(re(2.0)),
        ),
        derived(
            "Dis",
            "distributivity of a phase over addition",
            3,
            |p| {
                seq(&[
                    par(&[z(0, 1, p[0]), z(0, 1, p[1])]),
                    flip(&w_node()),
                    z(1, 1, p[2]),
                ])
            },
            |p| {
                seq(&[
                    par(&[z(0, 1, p[0] * p[2]), z(0, 1, p[1] * p[2])]),
                    flip(&w_node()),
                ])
            },
        ),
        fixed(
            "BiA",
            "AND-copy bialgebra",
            seq(&[and_gate(2), copy()]),
            seq(&[
                par(&[copy(), copy()]),
                par(&[id(1), Diagram::swap(), id(1)]),
                par(&[and_gate(2), and_gate(2)]),
            ]),
        ),
        derived(
            "Brkp",
            "AND with the one state",
            1,
            |p| seq(&[par(&[z(0, 1, p[0]), x(0, 1, Pi)]), and_gate(2)]),
            |p| z(0, 1, p[0]),
        ),
        fixed(
            "Tri-hopf",
            "triangle between copy and XOR",
            seq(&[copy(), par(&[Diagram::triangle(), id(1)]), x(2, 1, Zero)]),
            Diagram::triangle(),
        ),
        fixed(
            "Tri-conj",
            "green pi conjugates the triangle to its inverse",
            seq(&[z(1, 1, re(-1.0)), Diagram::triangle(), z(1, 1, re(-1.0))]),
            Diagram::triangle_inv(),
        ),
        fixed(
            "Tri-flip",
            "red pi conjugates the triangle to its transpose",
            seq(&[x(1, 1, Pi), Diagram::triangle(), x(1, 1, Pi)]),
            flip(&Diagram::triangle()),
        ),
        fixed(
            "And-sym",
            "AND is symmetric",
            seq(&[Diagram::swap(), and_gate(2)]),
            and_gate(2),
        ),
        fixed(
            "And-zero",
            "AND with the zero state",
            seq(&[par(&[x(0, 1, Zero), id(1)]), and_gate(2)]),
            par(&[z(1, 0, one()), x(0, 1, Zero)]),
        ),
    ]
}

fn row_operation_rules() -> Vec<RewriteRule> {
    let mut rules = vec![
        derived(
            "Mul-merge",
            "row multiplications multiply",
            2,
            |p| seq(&[mg(2, p[0], &[]), mg(2, p[1], &[])]),
            |p| mg(2, p[0] * p[1], &[]),
        ),
        derived(
            "pi-add-commute",
            "red pi moves through a row addition",
            1,
            |p| seq(&[g(3, p[0], &[0, 2], &[]), xs(3, &[1])]),
            |p| seq(&[xs(3, &[1]), g(3, p[0], &[0, 2], &[1])]),
        ),
        derived(
            "pi-add-commute-target",
            "red pi moves through a row addition on a target wire",
            1,
            |p| seq(&[g(2, p[0], &[0], &[]), xs(2, &[0])]),
            |p| seq(&[xs(2, &[0]), g(2, p[0], &[0], &[0])]),
        ),
        derived(
            "pi-mul-commute",
            "red pi moves through a row multiplication",
            1,
            |p| seq(&[mg(2, p[0], &[]), xs(2, &[1])]),
            |p| seq(&[xs(2, &[1]), mg(2, p[0], &[1])]),
        ),
        derived(
            "pi-pair-add",
            "red pi pair moves through a row addition",
            1,
            |p| seq(&[g(3, p[0], &[0], &[]), xs(3, &[1, 2])]),
            |p| seq(&[xs(3, &[1, 2]), g(3, p[0], &[0], &[1, 2])]),
        ),
        derived(
            "pi-pair-mul",
            "red pi pair moves through a row multiplication",
            1,
            |p| seq(&[mg(3, p[0], &[]), xs(3, &[0, 2])]),
            |p| seq(&[xs(3, &[0, 2]), mg(3, p[0], &[0, 2])]),
        ),
        derived(
            "add-extend",
            "row addition tensored with a wire",
            1,
            |p| par(&[g(2, p[0], &[0], &[]), id(1)]),
            |p| seq(&[g(3, p[0], &[1], &[]), g(3, p[0], &[1], &[0])]),
        ),
        derived(
            "add-merge",
            "row additions on the same row add",
            2,
            |p| seq(&[g(3, p[0], &[0, 1], &[2]), g(3, p[1], &[0, 1], &[2])]),
            |p| g(3, p[0] + p[1], &[0, 1], &[2]),
        ),
        derived(
            "mul-extend",
            "row multiplication tensored with a wire",
            1,
            |p| par(&[mg(2, p[0], &[]), id(1)]),
            |p| seq(&[mg(3, p[0], &[]), mg(3, p[0], &[0])]),
        ),
        derived(
            "mul-merge-neg",
            "row multiplications with equal controls multiply",
            2,
            |p| seq(&[mg(3, p[0], &[1]), mg(3, p[1], &[1])]),
            |p| mg(3, p[0] * p[1], &[1]),
        ),
        derived(
            "mul-add-combine",
            "row multiplication absorbed into a row addition on the one state",
            2,
            |p| {
                seq(&[
                    ones_state(3),
                    g(3, p[0], &[0, 2], &[]),
                    mg(3, p[1], &[0, 2]),
                ])
            },
            |p| seq(&[ones_state(3), g(3, p[0] * p[1], &[0, 2], &[])]),
        ),
        derived(
            "add-pair-combine",
            "stacked row additions combine on the one state",
            2,
            |p| {
                seq(&[
                    ones_state(3),
                    g(3, p[0], &[0], &[]),
                    g(3, p[1], &[1, 2], &[0]),
                ])
            },
            |p| {
                seq(&[
                    ones_state(3),
                    g(3, p[0], &[0], &[]),
                    g(3, p[0] * p[1], &[0, 1, 2], &[]),
                ])
            },
        ),
        derived(
            "pi-controlled-fix",
            "row addition with a negated control fixes the one state",
            1,
            |p| seq(&[ones_state(3), g(3, p[0], &[0, 2], &[1])]),
            |_| ones_state(3),
        ),
        fixed(
            "cnot-commute",
            "CNOTs sharing a control commute",
            seq(&[cnot(3, 0, 1), cnot(3, 0, 2)]),
            seq(&[cnot(3, 0, 2), cnot(3, 0, 1)]),
        ),
        derived(
            "plug-sum",
            "plugged normal form on two wires",
            2,
            |p| {
                seq(&[
                    ones_state(2),
                    g(2, p[0], &[0, 1], &[]),
                    mg(2, p[1], &[]),
                    Diagram::cup(),
                ])
            },
            |p| sc(p[0] + p[1]),
        ),
        derived(
            "plug-kill",
            "plugging removes an off-diagonal row addition",
            1,
            |p| seq(&[ones_state(2), g(2, p[0], &[1], &[]), Diagram::cup()]),
            |_| seq(&[ones_state(2), Diagram::cup()]),
        ),
        derived(
            "plug-kill-3",
            "plugging removes an off-diagonal row addition on three wires",
            1,
            |p| {
                seq(&[
                    ones_state(3),
                    g(3, p[0], &[1], &[]),
                    par(&[id(1), Diagram::cup()]),
                ])
            },
            |_| seq(&[ones_state(3), par(&[id(1), Diagram::cup()])]),
        ),
    ];

    // commutations between row operations
    type Side = fn(C64) -> Diagram;
    let pairs: Vec<(&str, &str, Side, Side)> = vec![
        (
            "add-commute",
            "row additions commute",
            |a| g(3, a, &[0, 1], &[]),
            |b| g(3, b, &[2], &[]),
        ),
        (
            "add-commute-neg",
            "row additions with equal negated controls commute",
            |a| g(3, a, &[0], &[2]),
            |b| g(3, b, &[1], &[2]),
        ),
        (
            "add-commute-mixed",
            "row additions with different negated controls commute",
            |a| g(3, a, &[0], &[1]),
            |b| g(3, b, &[2], &[0]),
        ),
        (
            "mul-commute",
            "row multiplications commute",
            |a| mg(2, a, &[]),
            |b| mg(2, b, &[0]),
        ),
        (
            "mul-commute-neg",
            "row multiplications with negated controls commute",
            |a| mg(3, a, &[0, 1]),
            |b| mg(3, b, &[2]),
        ),
        (
            "add-mul-commute",
            "row addition commutes with a negated row multiplication",
            |a| g(3, a, &[0, 1], &[]),
            |b| mg(3, b, &[2]),
        ),
        (
            "add-mul-commute-neg",
            "negated row addition commutes with a negated row multiplication",
            |a| g(3, a, &[2], &[0]),
            |b| mg(3, b, &[1]),
        ),
        (
            "add-mul-commute-pair",
            "row addition and row multiplication with disjoint negated controls commute",
            |a| g(3, a, &[0], &[1]),
            |b| mg(3, b, &[2]),
        ),
        (
            "add-pair-commute-1",
            "row additions with negated pairs commute",
            |a| g(3, a, &[0], &[1]),
            |b| g(3, b, &[1], &[2]),
        ),
        (
            "add-pair-commute-2",
            "row additions with negated pairs commute",
            |a| g(3, a, &[0], &[1, 2]),
            |b| g(3, b, &[2], &[0]),
        ),
        (
            "add-pair-commute-3",
            "row additions with negated pairs commute",
            |a| g(3, a, &[0, 1], &[2]),
            |b| g(3, b, &[2], &[1]),
        ),
        (
            "add-pair-commute-4",
            "row additions with negated pairs commute",
            |a| g(2, a, &[1], &[0]),
            |b| g(2, b, &[0], &[1]),
        ),
        (
            "add-pair-mul-commute-1",
            "negated row addition commutes with row multiplication",
            |a| g(2, a, &[0], &[1]),
            |b| mg(2, b, &[]),
        ),
        (
            "add-pair-mul-commute-2",
            "negated row addition commutes with row multiplication",
            |a| g(3, a, &[1, 2], &[0]),
            |b| mg(3, b, &[1]),
        ),
        (
            "add-pair-mul-commute-3",
            "negated row addition commutes with row multiplication",
            |a| g(3, a, &[0], &[1, 2]),
            |b| mg(3, b, &[0, 1]),
        ),
    ];
    for (name, label, a, b) in pairs {
        rules.push(commute(name, label, a, b));
    }

    // a one-wire row operation next to n = 2 wires expands into 2^n factors
    rules.push(derived(
        "lines-add-left",
        "wires tensored with a row addition",
        1,
        |p| par(&[id(2), g(1, p[0], &[0], &[])]),
        |p| {
            let parts: Vec<Diagram> = subsets(&[1, 2])
                .iter()
                .map(|n| g(3, p[0], &[0], n))
                .collect();
            seq(&parts)
        },
    ));
    rules.push(derived(
        "lines-add-right",
        "row addition tensored with wires",
        1,
        |p| par(&[g(1, p[0], &[0], &[]), id(2)]),
        |p| {
            let parts: Vec<Diagram> = subsets(&[0, 1])
                .iter()
                .map(|n| g(3, p[0], &[2], n))
                .collect();
            seq(&parts)
        },
    ));
    rules.push(derived(
        "lines-mul",
        "wires tensored with a row multiplication",
        1,
        |p| par(&[id(2), mg(1, p[0], &[])]),
        |p| {
            let parts: Vec<Diagram> = subsets(&[1, 2]).iter().map(|n| mg(3, p[0], n)).collect();
            seq(&parts)
        },
    ));
    rules
}

/// The derived-rule library.
pub fn derived_catalog() -> Vec<RewriteRule> {
    let mut all = scalar_rules();
    all.extend(spider_rules());
    all.extend(triangle_rules());
    all.extend(row_operation_rules());
    all
}
