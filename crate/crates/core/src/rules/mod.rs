//! Rewrite rules as parameterised pairs of diagrams.
//!
//! The axioms ([`axioms`]) and the derived equalities ([`derived_catalog`])
//! are stored as builders from parameter lists to concrete left- and
//! right-hand sides. Nothing here is trusted: [`check_soundness`] compares
//! both sides under the matrix semantics, for random and forced parameter
//! draws and for the upside-down flipped variant.

mod axioms;
mod derived;
mod soundness;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::diagram::{flip, tensor, Diagram, XPhase};

pub use axioms::axioms;
pub use derived::derived_catalog;
pub use soundness::{
    check_catalog, check_soundness, check_soundness_seeded, Failure, SoundnessReport, FORCED_DRAWS,
};

/// Builds one side of a rule from its parameters.
pub type Builder = Arc<dyn Fn(&[C64]) -> Diagram + Send + Sync>;

/// Where a rule comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Axiom,
    /// A derived equality, labelled with a short description.
    Derived(String),
    /// Loaded from user-supplied files.
    External,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Axiom => write!(f, "axiom"),
            Origin::Derived(label) => write!(f, "derived:{label}"),
            Origin::External => write!(f, "external"),
        }
    }
}

/// Admissible parameter values.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Domain {
    #[default]
    Any,
    /// The listed parameter slots must be non-zero.
    NonZero(Vec<usize>),
}

impl Domain {
    pub fn admits(&self, params: &[C64]) -> bool {
        match self {
            Domain::Any => true,
            Domain::NonZero(slots) => slots.iter().all(|&k| params[k].norm() > 1e-12),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleError {
    #[error("rule {rule} takes {expected} parameters, got {found}")]
    Arity {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("parameters {params:?} are outside the domain of rule {rule}")]
    Domain { rule: String, params: Vec<C64> },
}

/// A named equality between two diagram families.
#[derive(Clone)]
pub struct RewriteRule {
    pub name: String,
    pub origin: Origin,
    pub arity: usize,
    pub domain: Domain,
    pub flipped: bool,
    lhs: Builder,
    rhs: Builder,
}

impl fmt::Debug for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteRule")
            .field("name", &self.name)
            .field("origin", &self.origin)
            .field("arity", &self.arity)
            .field("domain", &self.domain)
            .field("flipped", &self.flipped)
            .finish()
    }
}

impl RewriteRule {
    pub fn new(
        name: impl Into<String>,
        origin: Origin,
        arity: usize,
        lhs: impl Fn(&[C64]) -> Diagram + Send + Sync + 'static,
        rhs: impl Fn(&[C64]) -> Diagram + Send + Sync + 'static,
    ) -> Self {
        RewriteRule {
            name: name.into(),
            origin,
            arity,
            domain: Domain::Any,
            flipped: false,
            lhs: Arc::new(lhs),
            rhs: Arc::new(rhs),
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// A parameterless rule between two fixed diagrams.
    pub fn constant(name: impl Into<String>, origin: Origin, lhs: Diagram, rhs: Diagram) -> Self {
        Self::new(name, origin, 0, move |_| lhs.clone(), move |_| rhs.clone())
    }

    pub fn instantiate(&self, params: &[C64]) -> Result<(Diagram, Diagram), RuleError> {
        if params.len() != self.arity {
            return Err(RuleError::Arity {
                rule: self.name.clone(),
                expected: self.arity,
                found: params.len(),
            });
        }
        if !self.domain.admits(params) {
            return Err(RuleError::Domain {
                rule: self.name.clone(),
                params: params.to_vec(),
            });
        }
        Ok(((self.lhs)(params), (self.rhs)(params)))
    }

    /// The upside-down variant: both sides flipped.
    pub fn flip(&self) -> RewriteRule {
        let (lhs, rhs) = (self.lhs.clone(), self.rhs.clone());
        RewriteRule {
            flipped: !self.flipped,
            lhs: Arc::new(move |p| flip(&lhs(p))),
            rhs: Arc::new(move |p| flip(&rhs(p))),
            ..self.clone()
        }
    }

    /// A deliberately broken copy: every right-hand phase is negated, and a
    /// phase-free right-hand side gets a factor `-1`.
    pub fn corrupted(&self) -> RewriteRule {
        let rhs = self.rhs.clone();
        RewriteRule {
            rhs: Arc::new(move |p| {
                let d = rhs(p);
                if d.nodes().any(|(_, n)| n.kind.is_z()) {
                    d.map_phases(|a| -a)
                } else {
                    tensor(&d, &Diagram::scalar(C64::new(-1.0, 0.0)))
                }
            }),
            ..self.clone()
        }
    }
}

/// Axioms followed by the derived catalogue.
pub fn full_catalog() -> Vec<RewriteRule> {
    let mut all = axioms();
    all.extend(derived_catalog());
    all
}

pub fn rule_by_name(name: &str) -> Option<RewriteRule> {
    full_catalog().into_iter().find(|r| r.name == name)
}

// --- small constructors shared by the catalogues --------------------------

pub(crate) fn one() -> C64 {
    C64::new(1.0, 0.0)
}

pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub(crate) fn z(n: usize, m: usize, a: C64) -> Diagram {
    Diagram::z_spider(n, m, a)
}

pub(crate) fn x(n: usize, m: usize, tau: XPhase) -> Diagram {
    Diagram::x_spider(n, m, tau)
}

pub(crate) fn id(n: usize) -> Diagram {
    Diagram::identity(n)
}

pub(crate) fn sc(a: C64) -> Diagram {
    Diagram::scalar(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{interpret, matrices_equal};

    #[test]
    fn names_are_unique() {
        let all = full_catalog();
        let mut names: Vec<&str> = all.iter().map(|r| r.name.as_str()).collect();
        names.sort_unstable();
        let before = names.len();
        names.dedup();
        assert_eq!(before, names.len());
    }

    #[test]
    fn instantiate_checks_arity_and_domain() {
        let s1 = rule_by_name("S1").unwrap();
        assert!(matches!(
            s1.instantiate(&[one()]),
            Err(RuleError::Arity { expected: 2, .. })
        ));
        let pic = rule_by_name("Pic").unwrap();
        assert!(matches!(
            pic.instantiate(&[re(0.0)]),
            Err(RuleError::Domain { .. })
        ));
        assert!(pic.instantiate(&[re(2.0)]).is_ok());
    }

    #[test]
    fn s1_instance_fuses_parameters() {
        let (a, b) = (C64::new(0.5, 1.0), C64::new(-2.0, 0.3));
        let (lhs, rhs) = rule_by_name("S1").unwrap().instantiate(&[a, b]).unwrap();
        let expected = interpret(&z(2, 3, a * b)).unwrap();
        assert!(matrices_equal(&interpret(&lhs).unwrap(), &expected, 1e-12));
        assert!(matrices_equal(&interpret(&rhs).unwrap(), &expected, 1e-12));
    }

    #[test]
    fn boundary_types_match() {
        for rule in full_catalog() {
            let params = vec![C64::new(0.7, -0.2); rule.arity];
            let (l, r) = rule.instantiate(&params).unwrap();
            assert_eq!(
                (l.n_inputs(), l.n_outputs()),
                (r.n_inputs(), r.n_outputs()),
                "{}",
                rule.name
            );
        }
    }

    #[test]
    fn flip_transposes_both_sides() {
        let rule = rule_by_name("Bas1").unwrap();
        let (l, _) = rule.instantiate(&[]).unwrap();
        let (fl, _) = rule.flip().instantiate(&[]).unwrap();
        assert!(rule.flip().flipped);
        assert_eq!(interpret(&fl).unwrap(), interpret(&l).unwrap().transpose());
    }
}
