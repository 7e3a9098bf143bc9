// SPDX-License-Identifier: Apache-2.0
//! Stability criteria for specific resolution shapes.

use super::{kronecker_semistable, Certainty, KroneckerModule, StabilityVerdict, Status, Witness};
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::Form;
use crate::sheaf::{forms_rank, SheafMorphism};

/// Literal reading: every maximal minor is a nonzero form.
pub fn all_minors_nonzero<F: Field>(phi: &SheafMorphism<F>) -> bool {
    phi.maximal_minors().iter().all(|m| !m.is_zero())
}

/// Minor criterion for `2O(-1) -> 3O` (3 rows, 2 linear columns): the three
/// maximal minors are linearly independent quadrics.
///
/// Independence is the form of "all maximal minors nonzero" that survives
/// row and column operations; it holds exactly when the module is stable.
pub fn minors_criterion_23<F: Field>(phi: &SheafMorphism<F>) -> Result<bool> {
    if phi.rows() != 3 || phi.cols() != 2 || !phi.is_linear() {
        return Err(PslError::ShapeMismatch(format!(
            "expected 2 linear columns and 3 rows, got {:?} -> {:?}",
            phi.source(),
            phi.target()
        )));
    }
    Ok(forms_rank(&phi.maximal_minors()) == 3)
}

/// Stability of the cokernel of `4O(-1) -> 4O` through the `q = 3`
/// Kronecker module on `F^4 -> F^4`. Not stable exactly when some `H` has
/// `dim K <= dim H`, which is a block form with a zero `m x (4-m)` corner.
pub fn reducibility_44<F: Field>(phi: &SheafMorphism<F>, budget: u128) -> Result<StabilityVerdict<F>> {
    if phi.rows() != 4 || phi.cols() != 4 || !phi.is_linear() {
        return Err(PslError::ShapeMismatch(format!(
            "expected 4O(a) -> 4O(a+1), got {:?} -> {:?}",
            phi.source(),
            phi.target()
        )));
    }
    let tau = KroneckerModule::from_linear(phi)?;
    kronecker_semistable(&tau, budget)
}

/// `O(-2) + O(-1) -> O + O(1)`: stable iff `phi12` divides neither `phi11`
/// nor `phi22`; strictly semistable otherwise.
pub fn stability_5c<F: Field>(phi: &SheafMorphism<F>) -> Result<StabilityVerdict<F>> {
    if phi.source() != [-2, -1] || phi.target() != [0, 1] {
        return Err(PslError::ShapeMismatch(format!(
            "expected [-2, -1] -> [0, 1], got {:?} -> {:?}",
            phi.source(),
            phi.target()
        )));
    }
    let field = phi.field();
    let phi12 = phi.entry(0, 1);
    if phi12.is_zero() {
        return Err(PslError::OutOfStratum("phi12 = 0".into()));
    }
    let divides = |name: &str, g: &Form<F>| {
        g.divide_exact(phi12).map(|quotient| Witness::Divisor {
            entry: name.to_string(),
            quotient,
        })
    };
    let witness = divides("phi11", phi.entry(0, 0)).or_else(|| divides("phi22", phi.entry(1, 1)));
    Ok(StabilityVerdict {
        status: if witness.is_some() {
            Status::StrictlySemistable
        } else {
            Status::Stable
        },
        certainty: Certainty::Exact,
        field: field.spec(),
        witness,
    })
}
