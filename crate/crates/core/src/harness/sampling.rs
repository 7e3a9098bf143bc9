// SPDX-License-Identifier: Apache-2.0
//! Random members of each stratum, drawn from the row's resolution shape and
//! filtered by its genericity predicate.

use rand::Rng;

use crate::atlas::StratumDescriptor;
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::Form;
use crate::sheaf::{forms_rank, make_oc, normal_form_42, SheafMorphism, SheafPresentation};

/// Rejections tolerated before a row is declared exhausted.
pub const MAX_RETRIES: usize = 100;

/// Name of the predicate enforced for a row, as reported on exhaustion.
pub fn row_predicate(id: &str) -> &'static str {
    match id {
        "X0(4,1)" => "maximal minors of the linear 2x3 block linearly independent",
        "X1(4,1)" => "linear column entries linearly independent",
        "X0(4,2)" => "quadric rows and columns linearly independent",
        "X1(4,2)" => "X1, X2 and Y1, Y2 linearly independent",
        "X2(4,2)" => "quartic nonzero",
        "X0(4,3)" => "maximal minors of the linear 3x2 block linearly independent",
        "X1(4,3)" => "linear row entries linearly independent",
        "X0(4,4)" => "injective",
        "X1(4,4)" => "phi12 nonzero",
        _ => "unknown row",
    }
}

fn random_morphism<F: Field, R: Rng + ?Sized>(field: F, row: &StratumDescriptor, rng: &mut R) -> SheafMorphism<F> {
    SheafMorphism::from_fn(field, row.source.to_vec(), row.target.to_vec(), |_, _, d| {
        Form::random(field, d, rng)
    })
    .expect("entries have the prescribed degrees")
}

fn independent<F: Field>(forms: &[&Form<F>]) -> bool {
    let owned: Vec<Form<F>> = forms.iter().map(|f| (*f).clone()).collect();
    forms_rank(&owned) == owned.len()
}

/// The row predicate, without the injectivity requirement.
fn generic<F: Field>(id: &str, phi: &SheafMorphism<F>) -> bool {
    let e = |i, j| phi.entry(i, j);
    match id {
        // 3O(-2) -> 2O(-1) + O
        "X0(4,1)" => independent(&phi.block(&[0, 1], &[0, 1, 2]).maximal_minors().iter().collect::<Vec<_>>()),
        // O(-3) + O(-1) -> 2O
        "X1(4,1)" => independent(&[e(0, 1), e(1, 1)]),
        // 2O(-2) -> 2O: Kronecker semistable for q = 6
        "X0(4,2)" => !rows_or_cols_dependent(phi),
        // 2O(-2) + O(-1) -> O(-1) + 2O with alpha = 0
        "X1(4,2)" => e(0, 2).is_zero() && independent(&[e(0, 0), e(0, 1)]) && independent(&[e(1, 2), e(2, 2)]),
        // O(-2) + 2O(-1) -> 3O
        "X0(4,3)" => independent(&phi.block(&[0, 1, 2], &[1, 2]).maximal_minors().iter().collect::<Vec<_>>()),
        // 2O(-2) -> O(-1) + O(1)
        "X1(4,3)" => independent(&[e(0, 0), e(0, 1)]),
        // 4O(-1) -> 4O: injective ones are semistable
        "X0(4,4)" => true,
        // O(-2) + O(-1) -> O + O(1)
        "X1(4,4)" => !e(0, 1).is_zero(),
        _ => true,
    }
}

/// Whether some nontrivial combination of the two rows, or of the two
/// columns, of a 2x2 quadric matrix vanishes.
fn rows_or_cols_dependent<F: Field>(phi: &SheafMorphism<F>) -> bool {
    let flat = |forms: [&Form<F>; 2]| forms.iter().flat_map(|f| f.coeffs().to_vec()).collect::<Vec<_>>();
    let rows = [flat([phi.entry(0, 0), phi.entry(0, 1)]), flat([phi.entry(1, 0), phi.entry(1, 1)])];
    let cols = [flat([phi.entry(0, 0), phi.entry(1, 0)]), flat([phi.entry(0, 1), phi.entry(1, 1)])];
    let field = phi.field();
    [rows, cols].into_iter().any(|pair| {
        crate::linalg::Matrix::from_rows(field, pair.to_vec())
            .expect("equal lengths")
            .rank()
            < 2
    })
}

fn draw<F: Field, R: Rng + ?Sized>(field: F, row: &StratumDescriptor, rng: &mut R) -> Result<SheafMorphism<F>> {
    match row.id {
        "X1(4,2)" => {
            let l = |rng: &mut R| Form::random(field, 1, rng);
            let q = |rng: &mut R| Form::random(field, 2, rng);
            let (x1, x2, y1, y2) = (l(rng), l(rng), l(rng), l(rng));
            let quadrics = [q(rng), q(rng), q(rng), q(rng)];
            normal_form_42(&x1, &x2, &y1, &y2, [&quadrics[0], &quadrics[1], &quadrics[2], &quadrics[3]])
        }
        "X2(4,2)" => make_oc(&Form::random(field, 4, rng), 1).map(SheafPresentation::into_phi),
        _ => Ok(random_morphism(field, row, rng)),
    }
}

/// A random injective presentation in the given row, by rejection sampling.
pub fn sample_stratum<F: Field, R: Rng + ?Sized>(
    row: &StratumDescriptor,
    field: F,
    rng: &mut R,
) -> Result<SheafPresentation<F>> {
    for _ in 0..MAX_RETRIES {
        let phi = match draw(field, row, rng) {
            Ok(phi) => phi,
            Err(PslError::DependentForms { .. } | PslError::ZeroForm) => continue,
            Err(e) => return Err(e),
        };
        if generic(row.id, &phi) && phi.is_injective() {
            return SheafPresentation::new(phi);
        }
    }
    Err(PslError::GenericityExhausted {
        row: row.id.to_string(),
        predicate: row_predicate(row.id).to_string(),
    })
}

/// Whether `phi` satisfies the genericity predicate of the row whose shape
/// it has, injectivity included.
pub fn satisfies_row_predicate<F: Field>(row: &StratumDescriptor, phi: &SheafMorphism<F>) -> bool {
    phi.source() == row.source && phi.target() == row.target && generic(row.id, phi) && phi.is_injective()
}
