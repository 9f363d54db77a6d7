//! Equality of diagrams: normal-form comparison, cross-checked against the
//! matrix semantics.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::normalform::{nf_equal, normalize_with_cap, NormalForm, NormalFormError};
use crate::semantics::{interpret_with, ContractionOrder, SemanticsError, DEFAULT_WIRE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NormalForm,
    Semantic,
    Both,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceVerdict {
    pub equal: bool,
    pub method: Method,
    /// Largest entrywise difference of the two interpretations.
    pub max_deviation: f64,
    pub normal_forms: Option<(NormalForm, NormalForm)>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquivalenceError {
    #[error("type mismatch: {0}->{1} versus {2}->{3}")]
    TypeMismatch(usize, usize, usize, usize),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(
        "internal disagreement: normal forms say equal={normal_form}, \
         semantics say equal={semantic} (deviation {deviation:.3e})"
    )]
    Disagreement {
        normal_form: bool,
        semantic: bool,
        deviation: f64,
    },
}

pub fn check_equivalent(
    d1: &Diagram,
    d2: &Diagram,
    tol: f64,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    check_equivalent_with_cap(d1, d2, tol, DEFAULT_WIRE_CAP)
}

/// Normalises both diagrams and compares the forms; independently compares
/// the interpretations. The two verdicts must agree.
pub fn check_equivalent_with_cap(
    d1: &Diagram,
    d2: &Diagram,
    tol: f64,
    cap: usize,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    if (d1.n_inputs(), d1.n_outputs()) != (d2.n_inputs(), d2.n_outputs()) {
        return Err(EquivalenceError::TypeMismatch(
            d1.n_inputs(),
            d1.n_outputs(),
            d2.n_inputs(),
            d2.n_outputs(),
        ));
    }
    let nf1 = normalize_with_cap(d1, cap)?;
    let nf2 = normalize_with_cap(d2, cap)?;
    let by_nf = nf_equal(&nf1, &nf2, tol);

    let m1 = interpret_with(d1, ContractionOrder::Greedy, cap)?;
    let m2 = interpret_with(d2, ContractionOrder::Greedy, cap)?;
    let deviation = m1.max_abs_diff(&m2).expect("same boundary type");
    let by_matrix = deviation <= tol;

    if by_nf != by_matrix {
        return Err(EquivalenceError::Disagreement {
            normal_form: by_nf,
            semantic: by_matrix,
            deviation,
        });
    }
    Ok(EquivalenceVerdict {
        equal: by_nf,
        method: Method::Both,
        max_deviation: deviation,
        normal_forms: Some((nf1, nf2)),
    })
}
