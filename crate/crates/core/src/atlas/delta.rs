// SPDX-License-Identifier: Apache-2.0
//! The map `Delta(w) = alpha Q - Y X` from `Hom(2O(-2) + O(-1), O(-1) + 2O)`
//! to 2x2 matrices of quadrics, and the group map it is compatible with.

use rand::Rng;

use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::Form;
use crate::linalg::Matrix;
use crate::sheaf::{compose, forms_rank, SheafMorphism};

const SOURCE: [i32; 3] = [-2, -2, -1];
const TARGET: [i32; 3] = [-1, 0, 0];

/// A 2x2 matrix of quadratic forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricPair<F: Field> {
    pub entries: [[Form<F>; 2]; 2],
}

impl<F: Field> QuadricPair<F> {
    pub fn field(&self) -> F {
        self.entries[0][0].field()
    }

    /// `left . self . right` with scalar 2x2 matrices.
    pub fn transform(&self, left: &Matrix<F>, right: &Matrix<F>) -> Self {
        let field = self.field();
        let lq: Vec<Vec<Form<F>>> = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        (0..2).fold(Form::zero(field, 2), |acc, k| {
                            acc.add(&self.entries[k][j].scale(left.get(i, k)))
                        })
                    })
                    .collect()
            })
            .collect();
        let e = |i: usize, j: usize| {
            (0..2).fold(Form::zero(field, 2), |acc, k| acc.add(&lq[i][k].scale(right.get(k, j))))
        };
        Self {
            entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn rows_independent(&self) -> bool {
        let row = |i: usize| self.entries[i].iter().flat_map(|f| f.coeffs().to_vec()).collect::<Vec<_>>();
        Matrix::from_rows(self.field(), vec![row(0), row(1)]).expect("equal").rank() == 2
    }

    pub fn cols_independent(&self) -> bool {
        let col = |j: usize| (0..2).flat_map(|i| self.entries[i][j].coeffs().to_vec()).collect::<Vec<_>>();
        Matrix::from_rows(self.field(), vec![col(0), col(1)]).expect("equal").rank() == 2
    }

    /// Every 2x2 minor vanishes (rank at most one over the function field).
    pub fn determinant(&self) -> Form<F> {
        let e = &self.entries;
        e[0][0].mul(&e[1][1]).sub(&e[0][1].mul(&e[1][0]))
    }

    pub fn to_strings(&self) -> [[String; 2]; 2] {
        let s = |i: usize, j: usize| self.entries[i][j].to_string();
        [[s(0, 0), s(0, 1)], [s(1, 0), s(1, 1)]]
    }

    /// Dimension of the span of the four entries.
    pub fn span_dim(&self) -> usize {
        forms_rank(&[
            self.entries[0][0].clone(),
            self.entries[0][1].clone(),
            self.entries[1][0].clone(),
            self.entries[1][1].clone(),
        ])
    }
}

/// `Delta(w) = alpha [[q11, q12], [q21, q22]] - [Y1, Y2]^T [X1, X2]` for
/// `w = [[X1, X2, alpha], [q11, q12, Y1], [q21, q22, Y2]]`.
pub fn delta_map<F: Field>(w: &SheafMorphism<F>) -> Result<QuadricPair<F>> {
    if w.source() != SOURCE || w.target() != TARGET {
        return Err(PslError::ShapeMismatch(format!(
            "expected {SOURCE:?} -> {TARGET:?}, got {:?} -> {:?}",
            w.source(),
            w.target()
        )));
    }
    let alpha = w.entry(0, 2).coeffs()[0].clone();
    let e = |r: usize, c: usize| {
        w.entry(r + 1, c)
            .scale(&alpha)
            .sub(&w.entry(r + 1, 2).mul(w.entry(0, c)))
    };
    Ok(QuadricPair {
        entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
    })
}

/// `(nu1, nu2)` with `nu1 = [[alpha, 0], [phi, A]]` in `Aut(O(-1) + 2O)` and
/// `nu2 = [[B, 0], [psi, beta]]` in `Aut(2O(-2) + O(-1))`, acting by
/// `w -> nu1 w nu2^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement42<F: Field> {
    pub alpha: F::Elem,
    pub beta: F::Elem,
    pub a: Matrix<F>,
    pub b: Matrix<F>,
    /// Column of two linear forms.
    pub phi: [Form<F>; 2],
    /// Row of two linear forms.
    pub psi: [Form<F>; 2],
}

/// The image `tau(g)`, acting on quadric pairs by `Q -> left Q right^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tau<F: Field> {
    pub left: Matrix<F>,
    pub right: Matrix<F>,
}

impl<F: Field> Tau<F> {
    pub fn apply(&self, q: &QuadricPair<F>) -> Result<QuadricPair<F>> {
        let rinv = self.right.inverse().ok_or(PslError::SingularGroupElement)?;
        Ok(q.transform(&self.left, &rinv))
    }
}

impl<F: Field> GroupElement42<F> {
    pub fn identity(field: F) -> Self {
        Self {
            alpha: field.one(),
            beta: field.one(),
            a: Matrix::identity(field, 2),
            b: Matrix::identity(field, 2),
            phi: [Form::zero(field, 1), Form::zero(field, 1)],
            psi: [Form::zero(field, 1), Form::zero(field, 1)],
        }
    }

    pub fn random<R: Rng + ?Sized>(field: F, rng: &mut R) -> Self {
        Self {
            alpha: field.random_nonzero(rng),
            beta: field.random_nonzero(rng),
            a: Matrix::random_invertible(field, 2, rng),
            b: Matrix::random_invertible(field, 2, rng),
            phi: [Form::random(field, 1, rng), Form::random(field, 1, rng)],
            psi: [Form::random(field, 1, rng), Form::random(field, 1, rng)],
        }
    }

    fn field(&self) -> F {
        self.a.field()
    }

    fn check(&self) -> Result<()> {
        let f = self.field();
        if f.is_zero(&self.alpha)
            || f.is_zero(&self.beta)
            || f.is_zero(&self.a.determinant()?)
            || f.is_zero(&self.b.determinant()?)
        {
            return Err(PslError::SingularGroupElement);
        }
        Ok(())
    }

    pub fn nu1(&self) -> Result<SheafMorphism<F>> {
        let f = self.field();
        let c = |x: &F::Elem| Form::constant(f, x.clone());
        let entries = vec![
            vec![c(&self.alpha), Form::zero(f, 1), Form::zero(f, 1)],
            vec![self.phi[0].clone(), c(self.a.get(0, 0)), c(self.a.get(0, 1))],
            vec![self.phi[1].clone(), c(self.a.get(1, 0)), c(self.a.get(1, 1))],
        ];
        SheafMorphism::new(f, TARGET.to_vec(), TARGET.to_vec(), entries)
    }

    pub fn nu2(&self) -> Result<SheafMorphism<F>> {
        let f = self.field();
        let c = |x: &F::Elem| Form::constant(f, x.clone());
        let entries = vec![
            vec![c(self.b.get(0, 0)), c(self.b.get(0, 1)), Form::zero(f, -1)],
            vec![c(self.b.get(1, 0)), c(self.b.get(1, 1)), Form::zero(f, -1)],
            vec![self.psi[0].clone(), self.psi[1].clone(), c(&self.beta)],
        ];
        SheafMorphism::new(f, SOURCE.to_vec(), SOURCE.to_vec(), entries)
    }

    /// `[[B^{-1}, 0], [-beta^{-1} psi B^{-1}, beta^{-1}]]`.
    pub fn nu2_inverse(&self) -> Result<SheafMorphism<F>> {
        self.check()?;
        let f = self.field();
        let binv = self.b.inverse().ok_or(PslError::SingularGroupElement)?;
        let beta_inv = f.inv(&self.beta).ok_or(PslError::SingularGroupElement)?;
        let c = |x: &F::Elem| Form::constant(f, x.clone());
        let psi_binv = |j: usize| {
            (0..2).fold(Form::zero(f, 1), |acc, k| acc.add(&self.psi[k].scale(binv.get(k, j))))
        };
        let low = |j: usize| psi_binv(j).scale(&f.neg(&beta_inv));
        let entries = vec![
            vec![c(binv.get(0, 0)), c(binv.get(0, 1)), Form::zero(f, -1)],
            vec![c(binv.get(1, 0)), c(binv.get(1, 1)), Form::zero(f, -1)],
            vec![low(0), low(1), c(&beta_inv)],
        ];
        SheafMorphism::new(f, SOURCE.to_vec(), SOURCE.to_vec(), entries)
    }

    /// `g . w = nu1 w nu2^{-1}`.
    pub fn act(&self, w: &SheafMorphism<F>) -> Result<SheafMorphism<F>> {
        compose(&self.nu1()?, &compose(w, &self.nu2_inverse()?)?)
    }

    /// `tau(g) = alpha beta^{-1} A B^{-1}`: left factor `(alpha/beta) A`,
    /// right factor `B`.
    pub fn tau(&self) -> Result<Tau<F>> {
        self.check()?;
        let f = self.field();
        let ratio = f.div(&self.alpha, &self.beta).ok_or(PslError::SingularGroupElement)?;
        Ok(Tau {
            left: self.a.scale(&ratio),
            right: self.b.clone(),
        })
    }
}
