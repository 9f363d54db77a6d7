//! Pattern matching and rule application on diagrams, and a terminating
//! simplification strategy.
//!
//! Matchers are hand-written for the rules the simplifier uses; every
//! application removes nodes or, failing that, wires, so repeated rewriting
//! stops. Scalars produced by rewrites are collected into a leg-free green
//! spider and never dropped unless they equal one.

use std::collections::BTreeSet;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Diagram, NodeId, NodeKind, Port};
use crate::rules::RewriteRule;

/// Rules with a matcher, in the order the simplifier tries them.
pub const SIMPLIFY_RULES: [&str; 8] = ["Sca", "S1", "S2", "H2", "Inv", "Hopf", "B1", "B3"];

const ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("match site for rule {0} is stale: the diagram changed since matching")]
    StaleSite(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Action {
    Fuse(NodeId, NodeId),
    DropLoop(NodeId, usize, usize),
    Identity(NodeId),
    CancelPair(NodeId, NodeId, C64),
    Hopf(NodeId, NodeId, NodeId, NodeId),
    StateCopy(NodeId, NodeId, NodeId),
    PiCommute(NodeId, Vec<usize>),
    MergeScalars(NodeId, NodeId),
    DropScalar(NodeId),
}

/// An occurrence of a rule's left-hand side in a particular diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchSite {
    pub rule: String,
    /// Matched node ids, ascending.
    pub nodes: Vec<NodeId>,
    /// Parameters read off the matched nodes.
    pub params: Vec<C64>,
    fingerprint: u64,
    action: Action,
}

fn site(
    d: &Diagram,
    rule: &str,
    nodes: Vec<NodeId>,
    params: Vec<C64>,
    action: Action,
) -> MatchSite {
    let mut nodes = nodes;
    nodes.sort_unstable();
    nodes.dedup();
    MatchSite {
        rule: rule.to_string(),
        nodes,
        params,
        fingerprint: d.fingerprint(),
        action,
    }
}

fn z_phase(d: &Diagram, id: NodeId) -> Option<C64> {
    d.node(id).and_then(|n| n.kind.phase())
}

fn is_kind(d: &Diagram, id: NodeId, kind: NodeKind) -> bool {
    d.node(id).is_some_and(|n| n.kind == kind)
}

fn is_one(a: C64) -> bool {
    (a - 1.0).norm() <= ZERO_TOL
}

fn has_self_loop(d: &Diagram, id: NodeId) -> bool {
    d.neighbours(id).iter().any(|(_, p)| p.node() == Some(id))
}

/// The far end of a degree-2 node seen from its neighbour `from`.
fn other_end(d: &Diagram, id: NodeId, from: Port) -> Option<Port> {
    let nb = d.neighbours(id);
    if nb.len() != 2 {
        return None;
    }
    if nb[0].1 == from {
        Some(nb[1].1)
    } else if nb[1].1 == from {
        Some(nb[0].1)
    } else {
        None
    }
}

/// Matches of `rule` in `d`, ordered by smallest matched node id. Rules
/// without a matcher have no matches.
pub fn find_matches(d: &Diagram, rule: &RewriteRule) -> Vec<MatchSite> {
    find_matches_by_name(d, &rule.name)
}

pub fn find_matches_by_name(d: &Diagram, name: &str) -> Vec<MatchSite> {
    let mut out = match name {
        "S1" => match_fusion(d),
        "S2" => match_identity(d),
        "H2" => match_pair(d, name, NodeKind::H, NodeKind::H),
        "Inv" => {
            let mut v = match_pair(d, name, NodeKind::Triangle, NodeKind::TriangleInv);
            v.extend(match_pair(
                d,
                name,
                NodeKind::TriangleInv,
                NodeKind::Triangle,
            ));
            v
        }
        "Hopf" => match_hopf(d),
        "B1" => match_state_copy(d),
        "B3" => match_pi_commute(d),
        "Sca" => match_scalars(d),
        _ => Vec::new(),
    };
    out.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    out.dedup_by(|a, b| a.nodes == b.nodes && a.action == b.action);
    out
}

fn match_fusion(d: &Diagram) -> Vec<MatchSite> {
    let mut out = Vec::new();
    for (u, node) in d.nodes() {
        let Some(a) = node.kind.phase() else { continue };
        for (k, p) in d.neighbours(u) {
            let Port::Node(v, j) = p else { continue };
            if v == u {
                if k < j {
                    out.push(site(d, "S1", vec![u], vec![a], Action::DropLoop(u, k, j)));
                }
            } else if u < v {
                if let Some(b) = z_phase(d, v) {
                    if !out
                        .iter()
                        .any(|s: &MatchSite| s.action == Action::Fuse(u, v))
                    {
                        out.push(site(d, "S1", vec![u, v], vec![a, b], Action::Fuse(u, v)));
                    }
                }
            }
        }
    }
    out
}

fn match_identity(d: &Diagram) -> Vec<MatchSite> {
    d.nodes()
        .filter(|(id, n)| {
            n.degree() == 2 && n.kind.phase().is_some_and(is_one) && !has_self_loop(d, *id)
        })
        .map(|(id, _)| site(d, "S2", vec![id], vec![], Action::Identity(id)))
        .collect()
}

/// Two degree-2 nodes where `first`'s output port feeds `second`'s input
/// port; for `H` any port pair counts since `H` is symmetric.
fn match_pair(d: &Diagram, rule: &str, first: NodeKind, second: NodeKind) -> Vec<MatchSite> {
    let mut out = Vec::new();
    let symmetric = first == NodeKind::H;
    for (u, node) in d.nodes() {
        if node.kind != first {
            continue;
        }
        for (k, p) in d.neighbours(u) {
            let Port::Node(v, j) = p else { continue };
            if v == u || !is_kind(d, v, second) {
                continue;
            }
            if !symmetric && (k != 1 || j != 0) {
                continue;
            }
            if symmetric && u > v {
                continue;
            }
            let factor = if symmetric {
                C64::new(2.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            };
            out.push(site(
                d,
                rule,
                vec![u, v],
                vec![],
                Action::CancelPair(u, v, factor),
            ));
        }
    }
    out
}

fn match_hopf(d: &Diagram) -> Vec<MatchSite> {
    let mut out = Vec::new();
    for (u, node) in d.nodes() {
        if !node.kind.is_z() {
            continue;
        }
        // H nodes hanging off u whose other end is a different green node
        let mut paths: Vec<(NodeId, NodeId)> = Vec::new();
        for (k, p) in d.neighbours(u) {
            let Port::Node(h, _) = p else { continue };
            if !is_kind(d, h, NodeKind::H) || paths.iter().any(|(hh, _)| *hh == h) {
                continue;
            }
            let Some(Port::Node(v, _)) = other_end(d, h, Port::Node(u, k)) else {
                continue;
            };
            if v != u && z_phase(d, v).is_some() {
                paths.push((h, v));
            }
        }
        for (x, &(h1, v)) in paths.iter().enumerate() {
            if v < u {
                continue;
            }
            if let Some(&(h2, _)) = paths[x + 1..].iter().find(|(_, w)| *w == v) {
                out.push(site(
                    d,
                    "Hopf",
                    vec![u, v, h1, h2],
                    vec![],
                    Action::Hopf(u, v, h1, h2),
                ));
                break;
            }
        }
    }
    out
}

/// `Z(c)` state with `c = +-1` through `H` (a computational basis state up
/// to a factor 2) into a green node of degree at most 2.
fn match_state_copy(d: &Diagram) -> Vec<MatchSite> {
    let mut out = Vec::new();
    for (s, node) in d.nodes() {
        let Some(c) = node.kind.phase() else { continue };
        if node.degree() != 1 || !(is_one(c) || is_one(-c)) {
            continue;
        }
        let Port::Node(h, hk) = d.partner(Port::Node(s, 0)).unwrap() else {
            continue;
        };
        if !is_kind(d, h, NodeKind::H) {
            continue;
        }
        let Some(Port::Node(t, _)) = d.partner(Port::Node(h, 1 - hk)) else {
            continue;
        };
        let Some(a) = z_phase(d, t) else { continue };
        let deg = d.node(t).unwrap().degree();
        if t == s || deg > 2 || has_self_loop(d, t) {
            continue;
        }
        out.push(site(
            d,
            "B1",
            vec![s, h, t],
            vec![c, a],
            Action::StateCopy(s, h, t),
        ));
    }
    out
}

/// Legs of `t` that start an `H - Z(-1) - H` chain (a red `pi`).
fn pi_chains(d: &Diagram, t: NodeId) -> Vec<(usize, [NodeId; 3], Port)> {
    let mut out = Vec::new();
    let mut used: BTreeSet<NodeId> = BTreeSet::new();
    for (k, p) in d.neighbours(t) {
        let Port::Node(h1, _) = p else { continue };
        if !is_kind(d, h1, NodeKind::H) {
            continue;
        }
        let Some(Port::Node(mid, _)) = other_end(d, h1, Port::Node(t, k)) else {
            continue;
        };
        let Some(phase) = z_phase(d, mid) else {
            continue;
        };
        if d.node(mid).unwrap().degree() != 2 || !is_one(-phase) {
            continue;
        }
        let to_mid = d
            .neighbours(h1)
            .into_iter()
            .find(|(_, q)| q.node() == Some(mid))
            .map(|(k1, _)| Port::Node(h1, k1))
            .unwrap();
        let Some(Port::Node(h2, h2k)) = other_end(d, mid, to_mid) else {
            continue;
        };
        if !is_kind(d, h2, NodeKind::H) || h2 == h1 {
            continue;
        }
        let end = d.partner(Port::Node(h2, 1 - h2k)).unwrap();
        let chain = [h1, mid, h2];
        if end
            .node()
            .is_some_and(|n| n == t || chain.contains(&n) || used.contains(&n))
            || chain.iter().any(|n| used.contains(n) || *n == t)
        {
            continue;
        }
        used.extend(chain);
        out.push((k, chain, end));
    }
    // a chain end must not sit inside another chain
    let all: BTreeSet<NodeId> = out.iter().flat_map(|(_, c, _)| c.iter().copied()).collect();
    out.retain(|(_, _, end)| end.node().is_none_or(|n| !all.contains(&n)));
    out
}

fn match_pi_commute(d: &Diagram) -> Vec<MatchSite> {
    let mut out = Vec::new();
    for (t, node) in d.nodes() {
        let Some(a) = node.kind.phase() else { continue };
        let deg = node.degree();
        if a.norm() <= ZERO_TOL || deg == 0 || has_self_loop(d, t) {
            continue;
        }
        let chains = pi_chains(d, t);
        if 2 * chains.len() <= deg {
            continue;
        }
        let mut nodes = vec![t];
        nodes.extend(chains.iter().flat_map(|(_, c, _)| c.iter().copied()));
        let legs = chains.iter().map(|(k, _, _)| *k).collect();
        out.push(site(d, "B3", nodes, vec![a], Action::PiCommute(t, legs)));
    }
    out
}

fn match_scalars(d: &Diagram) -> Vec<MatchSite> {
    let scalars: Vec<(NodeId, C64)> = d
        .nodes()
        .filter(|(_, n)| n.degree() == 0)
        .filter_map(|(id, n)| n.kind.phase().map(|a| (id, a)))
        .collect();
    let mut out = Vec::new();
    for &(id, a) in &scalars {
        if a.norm() <= ZERO_TOL {
            out.push(site(
                d,
                "Sca",
                vec![id],
                vec![a + 1.0],
                Action::DropScalar(id),
            ));
        }
    }
    if let [(u, a), (v, b), ..] = scalars[..] {
        out.push(site(
            d,
            "Sca",
            vec![u, v],
            vec![a + 1.0, b + 1.0],
            Action::MergeScalars(u, v),
        ));
    }
    out
}

// --- application ------------------------------------------------------------

/// Multiplies the diagram by `value`, folding it into an existing leg-free
/// green spider when there is one.
fn add_scalar(d: &mut Diagram, value: C64) {
    if is_one(value) {
        return;
    }
    let existing = d
        .nodes()
        .find(|(_, n)| n.degree() == 0 && n.kind.is_z())
        .map(|(id, _)| id);
    match existing {
        Some(id) => {
            let node = d.node_mut(id).unwrap();
            let a = node.kind.phase().unwrap();
            node.kind = NodeKind::Z((a + 1.0) * value - 1.0);
        }
        None => {
            d.insert_node(NodeKind::Z(value - 1.0), 0, 0);
        }
    }
}

/// Removes the given ports (already unwired) from a node's numbering.
fn drop_ports(d: &mut Diagram, id: NodeId, dropped: &[usize]) {
    let node = d.node(id).unwrap().clone();
    let keep: Vec<usize> = (0..node.degree())
        .filter(|k| !dropped.contains(k))
        .collect();
    let n_in = keep.iter().filter(|&&k| k < node.n_in).count();
    d.renumber_ports(id, &keep, n_in);
}

/// Removes a degree-2 node and reconnects its two neighbours. Returns
/// `true` if the node only touched itself, i.e. a closed loop vanished.
fn bypass(d: &mut Diagram, id: NodeId) -> bool {
    let partners = d.remove_node(id);
    let (a, b) = (partners[0], partners[1]);
    if a.node() == Some(id) {
        return true;
    }
    d.join(a, b)
}

/// Applies a match site. Fails when the diagram is not the one the site was
/// computed on.
pub fn apply(d: &Diagram, site: &MatchSite) -> Result<Diagram, RewriteError> {
    if d.fingerprint() != site.fingerprint {
        return Err(RewriteError::StaleSite(site.rule.clone()));
    }
    let mut out = d.clone();
    match &site.action {
        Action::Fuse(u, v) => fuse(&mut out, *u, *v),
        Action::DropLoop(u, k, j) => {
            out.unlink(Port::Node(*u, *k));
            drop_ports(&mut out, *u, &[*k, *j]);
        }
        Action::Identity(u) => {
            if bypass(&mut out, *u) {
                add_scalar(&mut out, C64::new(2.0, 0.0));
            }
        }
        Action::CancelPair(u, v, factor) => cancel_pair(&mut out, *u, *v, *factor),
        Action::Hopf(u, v, h1, h2) => {
            let mut drop_u = Vec::new();
            let mut drop_v = Vec::new();
            for h in [h1, h2] {
                for p in out.remove_node(*h) {
                    match p {
                        Port::Node(n, k) if n == *u => drop_u.push(k),
                        Port::Node(n, k) if n == *v => drop_v.push(k),
                        _ => unreachable!("Hopf path ends on the matched spiders"),
                    }
                }
            }
            drop_ports(&mut out, *u, &drop_u);
            drop_ports(&mut out, *v, &drop_v);
        }
        Action::StateCopy(s, h, t) => state_copy(&mut out, *s, *h, *t),
        Action::PiCommute(t, legs) => pi_commute(&mut out, *t, legs),
        Action::MergeScalars(u, v) => {
            let b = out.node(*v).unwrap().kind.phase().unwrap();
            out.remove_node(*v);
            let node = out.node_mut(*u).unwrap();
            let a = node.kind.phase().unwrap();
            node.kind = NodeKind::Z((a + 1.0) * (b + 1.0) - 1.0);
        }
        Action::DropScalar(u) => {
            out.remove_node(*u);
        }
    }
    debug_assert!(
        out.validate().is_ok(),
        "rewrite {} broke the diagram",
        site.rule
    );
    Ok(out)
}

fn fuse(d: &mut Diagram, u: NodeId, v: NodeId) {
    let nu = d.node(u).unwrap().clone();
    let nv = d.node(v).unwrap().clone();
    let phase = nu.kind.phase().unwrap() * nv.kind.phase().unwrap();
    // kept ports in order: inputs of u, inputs of v, outputs of u, outputs of v
    let mut kept: Vec<(Port, bool)> = Vec::new();
    for (id, node) in [(u, &nu), (v, &nv)] {
        for k in 0..node.n_in {
            kept.push((Port::Node(id, k), true));
        }
    }
    for (id, node) in [(u, &nu), (v, &nv)] {
        for k in node.n_in..node.degree() {
            kept.push((Port::Node(id, k), false));
        }
    }
    let between = |p: Port, q: Port| matches!((p, q), (Port::Node(a, _), Port::Node(b, _)) if (a == u && b == v) || (a == v && b == u));
    let partners: Vec<Port> = kept.iter().map(|(p, _)| d.partner(*p).unwrap()).collect();
    let keep: Vec<usize> = (0..kept.len())
        .filter(|&i| !between(kept[i].0, partners[i]))
        .collect();
    d.remove_node(u);
    d.remove_node(v);
    let n_in = keep.iter().filter(|&&i| kept[i].1).count();
    let w = d.insert_node(NodeKind::Z(phase), n_in, keep.len() - n_in);
    let new_index = |p: Port| keep.iter().position(|&i| kept[i].0 == p);
    for (new_k, &i) in keep.iter().enumerate() {
        let partner = partners[i];
        let target = match new_index(partner) {
            // self-loop on u or v survives as a loop on w
            Some(other) if partner.node() == Some(u) || partner.node() == Some(v) => {
                if other < new_k {
                    continue;
                }
                Port::Node(w, other)
            }
            _ => partner,
        };
        d.link_unchecked(Port::Node(w, new_k), target);
    }
}

fn cancel_pair(d: &mut Diagram, u: NodeId, v: NodeId, factor: C64) {
    // u's far end, then v's far end
    let pu = d.neighbours(u);
    let pv = d.neighbours(v);
    let far_u = pu.iter().map(|(_, p)| *p).find(|p| p.node() != Some(v));
    let far_v = pv.iter().map(|(_, p)| *p).find(|p| p.node() != Some(u));
    d.remove_node(u);
    d.remove_node(v);
    match (far_u, far_v) {
        (Some(a), Some(b)) => {
            d.link_unchecked(a, b);
            add_scalar(d, factor);
        }
        // the two nodes formed a closed ring: trace of the product
        _ => add_scalar(d, factor * 2.0),
    }
}

fn state_copy(d: &mut Diagram, s: NodeId, h: NodeId, t: NodeId) {
    let c = d.node(s).unwrap().kind.phase().unwrap();
    let a = d.node(t).unwrap().kind.phase().unwrap();
    // basis state 2|b>, b = 1 for c = -1
    let weight = if is_one(c) { C64::new(1.0, 0.0) } else { a };
    let h_port_to_t = d
        .neighbours(h)
        .into_iter()
        .find(|(_, p)| p.node() == Some(t))
        .map(|(k, _)| k)
        .unwrap();
    let t_other = d
        .neighbours(t)
        .into_iter()
        .map(|(_, p)| p)
        .find(|p| p.node() != Some(h));
    d.remove_node(t);
    match t_other {
        Some(q) => {
            d.link_unchecked(Port::Node(h, h_port_to_t), q);
            add_scalar(d, weight);
        }
        None => {
            d.remove_node(h);
            d.remove_node(s);
            add_scalar(d, weight * 2.0);
        }
    }
}

fn pi_commute(d: &mut Diagram, t: NodeId, legs: &[usize]) {
    let chains = pi_chains(d, t);
    let deg = d.node(t).unwrap().degree();
    let a = d.node(t).unwrap().kind.phase().unwrap();
    let k = chains
        .iter()
        .filter(|(leg, _, _)| legs.contains(leg))
        .count();
    for (leg, chain, end) in chains.iter().filter(|(leg, _, _)| legs.contains(leg)) {
        for n in chain {
            d.remove_node(*n);
        }
        d.link_unchecked(Port::Node(t, *leg), *end);
    }
    for leg in (0..deg).filter(|l| !legs.contains(l)) {
        let q = d.unlink(Port::Node(t, leg)).unwrap();
        let h1 = d.insert_node(NodeKind::H, 1, 1);
        let mid = d.insert_node(NodeKind::Z(C64::new(-1.0, 0.0)), 1, 1);
        let h2 = d.insert_node(NodeKind::H, 1, 1);
        d.link_unchecked(Port::Node(t, leg), Port::Node(h1, 0));
        d.link_unchecked(Port::Node(h1, 1), Port::Node(mid, 0));
        d.link_unchecked(Port::Node(mid, 1), Port::Node(h2, 0));
        d.link_unchecked(Port::Node(h2, 1), q);
    }
    d.node_mut(t).unwrap().kind = NodeKind::Z(C64::new(1.0, 0.0) / a);
    let exp = 2 * k as i32 - deg as i32;
    add_scalar(d, a * 2f64.powi(exp));
}

// --- simplification ----------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub rule: String,
    pub nodes: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub diagram: Diagram,
    pub steps: Vec<TraceStep>,
    /// The budget ran out while rewrites were still possible.
    pub exhausted: bool,
}

/// Budget used when none is given: ten steps per node.
pub fn default_budget(d: &Diagram) -> usize {
    10 * d.node_count()
}

fn first_match(d: &Diagram) -> Option<MatchSite> {
    SIMPLIFY_RULES
        .iter()
        .find_map(|name| find_matches_by_name(d, name).into_iter().next())
}

/// Rewrites with the terminating rule subset until no rule applies or
/// `budget` steps were taken.
pub fn simplify(d: &Diagram, budget: usize) -> Simplified {
    let mut current = d.clone();
    let mut steps = Vec::new();
    loop {
        let Some(site) = first_match(&current) else {
            return Simplified {
                diagram: current,
                steps,
                exhausted: false,
            };
        };
        if steps.len() >= budget {
            return Simplified {
                diagram: current,
                steps,
                exhausted: true,
            };
        }
        current = apply(&current, &site).expect("site computed on the current diagram");
        steps.push(TraceStep {
            rule: site.rule,
            nodes: site.nodes,
        });
    }
}
