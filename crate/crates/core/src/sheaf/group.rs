// SPDX-License-Identifier: Apache-2.0
//! Automorphisms of sums of line bundles and their action on morphisms.

use rand::Rng;

use super::SheafMorphism;
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::Form;
use crate::linalg::Matrix;

/// `left . right`, i.e. first `right: A -> B`, then `left: B -> C`.
pub fn compose<F: Field>(left: &SheafMorphism<F>, right: &SheafMorphism<F>) -> Result<SheafMorphism<F>> {
    if left.source() != right.target() {
        return Err(PslError::ShapeMismatch(format!(
            "cannot compose {:?} -> {:?} after {:?} -> {:?}",
            left.source(),
            left.target(),
            right.source(),
            right.target()
        )));
    }
    let field = left.field();
    SheafMorphism::from_fn(
        field,
        right.source().to_vec(),
        left.target().to_vec(),
        |i, j, d| {
            let mut acc = Form::zero(field, d);
            for k in 0..left.cols() {
                let (a, b) = (left.entry(i, k), right.entry(k, j));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        },
    )
}

fn automorphism_with<F: Field, R: Rng + ?Sized>(
    field: F,
    twists: &[i32],
    rng: &mut R,
    unipotent: bool,
) -> SheafMorphism<F> {
    let n = twists.len();
    // One invertible scalar block per twist value.
    let mut values: Vec<i32> = twists.to_vec();
    values.sort_unstable();
    values.dedup();
    let blocks: Vec<(i32, Vec<usize>, Matrix<F>)> = values
        .into_iter()
        .map(|v| {
            let idx: Vec<usize> = (0..n).filter(|&k| twists[k] == v).collect();
            let m = if unipotent {
                Matrix::identity(field, idx.len())
            } else {
                Matrix::random_invertible(field, idx.len(), rng)
            };
            (v, idx, m)
        })
        .collect();
    SheafMorphism::from_fn(field, twists.to_vec(), twists.to_vec(), |i, j, d| {
        if d > 0 {
            Form::random(field, d, rng)
        } else if d == 0 {
            let (_, idx, m) = blocks
                .iter()
                .find(|(v, _, _)| *v == twists[i])
                .expect("twist value present");
            let bi = idx.iter().position(|&k| k == i).expect("row in block");
            let bj = idx.iter().position(|&k| k == j).expect("col in block");
            Form::constant(field, m.get(bi, bj).clone())
        } else {
            Form::zero(field, d)
        }
    })
    .expect("degrees are consistent by construction")
}

/// Random element of `Aut(sum O(c_k))`: invertible scalar blocks on equal
/// twists, random forms below.
pub fn random_automorphism<F: Field, R: Rng + ?Sized>(field: F, twists: &[i32], rng: &mut R) -> SheafMorphism<F> {
    automorphism_with(field, twists, rng, false)
}

/// Random element of the unipotent radical: identity blocks on equal twists.
pub fn random_unipotent<F: Field, R: Rng + ?Sized>(field: F, twists: &[i32], rng: &mut R) -> SheafMorphism<F> {
    automorphism_with(field, twists, rng, true)
}

/// `nu_target . phi . nu_source`.
pub fn act<F: Field>(
    nu_target: &SheafMorphism<F>,
    phi: &SheafMorphism<F>,
    nu_source: &SheafMorphism<F>,
) -> Result<SheafMorphism<F>> {
    compose(nu_target, &compose(phi, nu_source)?)
}
