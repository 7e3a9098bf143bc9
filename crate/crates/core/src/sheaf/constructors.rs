// SPDX-License-Identifier: Apache-2.0
//! Named presentations: structure sheaves of curves and the normal forms of
//! the (4,2) open stratum.

use super::{forms_rank, SheafMorphism, SheafPresentation};
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::Form;
use crate::linalg::Matrix;

/// `O_C(d)` for the curve `f = 0`: `0 -> O(d - e) -> O(d) -> O_C(d) -> 0`
/// where `e = deg f`.
pub fn make_oc<F: Field>(f: &Form<F>, d: i32) -> Result<SheafPresentation<F>> {
    if f.is_zero() {
        return Err(PslError::ZeroForm);
    }
    let phi = SheafMorphism::new(f.field(), vec![d - f.degree()], vec![d], vec![vec![f.clone()]])?;
    SheafPresentation::new(phi)
}

/// `O_C` for the curve `f = 0`.
pub fn structure_sheaf<F: Field>(f: &Form<F>) -> Result<SheafPresentation<F>> {
    make_oc(f, 0)
}

/// General element of `Hom(2O(-2) + O(-1), O(-1) + 2O)`:
///
/// ```text
/// [ X1   X2   alpha ]
/// [ q11  q12  Y1    ]
/// [ q21  q22  Y2    ]
/// ```
pub fn w42<F: Field>(
    x: [&Form<F>; 2],
    alpha: F::Elem,
    q: [[&Form<F>; 2]; 2],
    y: [&Form<F>; 2],
) -> Result<SheafMorphism<F>> {
    let field = x[0].field();
    let entries = vec![
        vec![x[0].clone(), x[1].clone(), Form::constant(field, alpha)],
        vec![q[0][0].clone(), q[0][1].clone(), y[0].clone()],
        vec![q[1][0].clone(), q[1][1].clone(), y[1].clone()],
    ];
    SheafMorphism::new(field, vec![-2, -2, -1], vec![-1, 0, 0], entries)
}

/// The `alpha = 0` normal form `[[X1, X2, 0], [q11, q12, Y1], [q21, q22, Y2]]`
/// on `2O(-2) + O(-1) -> O(-1) + 2O`. Quadrics are `[q11, q12, q21, q22]`.
pub fn normal_form_42<F: Field>(
    x1: &Form<F>,
    x2: &Form<F>,
    y1: &Form<F>,
    y2: &Form<F>,
    quadrics: [&Form<F>; 4],
) -> Result<SheafMorphism<F>> {
    for (name, pair) in [("X", [x1, x2]), ("Y", [y1, y2])] {
        if pair.iter().any(|f| f.degree() != 1) || forms_rank(&[pair[0].clone(), pair[1].clone()]) < 2 {
            return Err(PslError::DependentForms {
                first: format!("{name}1 = {}", pair[0]),
                second: format!("{name}2 = {}", pair[1]),
            });
        }
    }
    let field = x1.field();
    w42(
        [x1, x2],
        field.zero(),
        [[quadrics[0], quadrics[1]], [quadrics[2], quadrics[3]]],
        [y1, y2],
    )
}

/// Whether the two points of a fiber normal form coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistinctOrEqual {
    Distinct,
    Equal,
}

/// Linear forms `(X1, X2, Z)` for the fiber normal forms.
///
/// Distinct points: `Z` vanishes at both, `X1` at `P1`, `X2` at `P2`.
/// Equal points: `X1, Z` vanish at `P1` and `X2` completes a basis.
pub fn vanishing_forms_4e4<F: Field>(
    field: F,
    p1: &[F::Elem; 3],
    p2: &[F::Elem; 3],
) -> Result<(Form<F>, Form<F>, Form<F>, DistinctOrEqual)> {
    let row = |p: &[F::Elem; 3]| p.to_vec();
    for p in [p1, p2] {
        if p.iter().all(|c| field.is_zero(c)) {
            return Err(PslError::DegeneratePoint("the zero vector is not a point".into()));
        }
    }
    let to_form = |v: &[F::Elem]| Form::linear(field, [v[0].clone(), v[1].clone(), v[2].clone()]);
    let both = Matrix::from_rows(field, vec![row(p1), row(p2)])?;
    let k1 = Matrix::from_rows(field, vec![row(p1)])?.kernel_basis();
    if both.rank() == 2 {
        let z = both.kernel_basis().basis()[0].clone();
        let pick = |p: &[F::Elem; 3]| -> Result<Vec<F::Elem>> {
            let k = Matrix::from_rows(field, vec![row(p)])?.kernel_basis();
            k.basis()
                .iter()
                .find(|v| Matrix::from_rows(field, vec![(*v).clone(), z.clone()]).map(|m| m.rank()) == Ok(2))
                .cloned()
                .ok_or_else(|| PslError::DegeneratePoint("no second vanishing form".into()))
        };
        let x1 = pick(p1)?;
        let x2 = pick(p2)?;
        Ok((to_form(&x1), to_form(&x2), to_form(&z), DistinctOrEqual::Distinct))
    } else {
        let b = k1.basis();
        let (x1, z) = (b[0].clone(), b[1].clone());
        let c = (0..3)
            .find(|&i| !field.is_zero(&p1[i]))
            .expect("nonzero point");
        let mut x2 = vec![field.zero(); 3];
        x2[c] = field.one();
        Ok((to_form(&x1), to_form(&x2), to_form(&z), DistinctOrEqual::Equal))
    }
}

/// Fiber normal form over the point pair `(P1, P2)`:
///
/// ```text
/// distinct:  [ X1        Z          0  ]     equal:  [ X1        Z          0  ]
///            [ a*X2^2    q12        Z  ]             [ a*X2^2    q12        Z  ]
///            [ q21       b*X1^2     X2 ]             [ q21       b*X2^2     X1 ]
/// ```
pub fn normal_form_4e4<F: Field>(
    field: F,
    p1: &[F::Elem; 3],
    p2: &[F::Elem; 3],
    alpha: F::Elem,
    beta: F::Elem,
    q12: &Form<F>,
    q21: &Form<F>,
) -> Result<SheafMorphism<F>> {
    let (x1, x2, z, kind) = vanishing_forms_4e4(field, p1, p2)?;
    let zero = Form::zero(field, 0);
    let (b_entry, last) = match kind {
        DistinctOrEqual::Distinct => (x1.mul(&x1).scale(&beta), x2.clone()),
        DistinctOrEqual::Equal => (x2.mul(&x2).scale(&beta), x1.clone()),
    };
    let entries = vec![
        vec![x1.clone(), z.clone(), zero],
        vec![x2.mul(&x2).scale(&alpha), q12.clone(), z],
        vec![q21.clone(), b_entry, last],
    ];
    SheafMorphism::new(field, vec![-2, -2, -1], vec![-1, 0, 0], entries)
}
