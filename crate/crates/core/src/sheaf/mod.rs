// SPDX-License-Identifier: Apache-2.0
//! Morphisms between sums of line bundles on the plane, and the sheaves
//! they present as cokernels.

mod constructors;
mod group;
mod json;
mod presentation;

pub use constructors::{
    make_oc, normal_form_42, normal_form_4e4, structure_sheaf, vanishing_forms_4e4, w42,
    DistinctOrEqual,
};
pub use group::{compose, random_automorphism, random_unipotent, act};
pub use json::{AnyMorphism, MorphismJson};
pub use presentation::SheafPresentation;

use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::{monomial_count, multiplication_map, Form};
use crate::linalg::Matrix;

/// Twists d of the summands O(d), in order.
pub type TwistList = Vec<i32>;

/// `phi: sum O(a_j) -> sum O(b_i)`; entry (i, j) has degree b_i - a_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafMorphism<F: Field> {
    field: F,
    source: TwistList,
    target: TwistList,
    entries: Vec<Vec<Form<F>>>,
}

impl<F: Field> SheafMorphism<F> {
    /// Validates and normalizes: zero entries are retagged with the expected
    /// degree.
    pub fn new(
        field: F,
        source: TwistList,
        target: TwistList,
        entries: Vec<Vec<Form<F>>>,
    ) -> Result<Self> {
        let phi = Self::new_unchecked(field, source, target, entries)?;
        phi.validate()?;
        Ok(phi.normalized())
    }

    /// Checks only the shape, not the degrees. Pair with [`validate`](Self::validate).
    pub fn new_unchecked(
        field: F,
        source: TwistList,
        target: TwistList,
        entries: Vec<Vec<Form<F>>>,
    ) -> Result<Self> {
        if source.is_empty() || target.is_empty() {
            return Err(PslError::EmptyTwistList);
        }
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(PslError::ShapeMismatch(format!(
                "expected {}x{} entries",
                target.len(),
                source.len()
            )));
        }
        Ok(Self {
            field,
            source,
            target,
            entries,
        })
    }

    /// Builds a morphism whose entry (i, j) is `f(i, j, degree)`.
    pub fn from_fn(
        field: F,
        source: TwistList,
        target: TwistList,
        mut f: impl FnMut(usize, usize, i32) -> Form<F>,
    ) -> Result<Self> {
        let entries = (0..target.len())
            .map(|i| {
                (0..source.len())
                    .map(|j| f(i, j, target[i] - source[j]))
                    .collect()
            })
            .collect();
        Self::new(field, source, target, entries)
    }

    pub fn zero(field: F, source: TwistList, target: TwistList) -> Result<Self> {
        Self::from_fn(field, source, target, |_, _, d| Form::zero(field, d))
    }

    /// Confirms the degree invariant; reports the first offending entry in
    /// row-major order.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expected = self.target[i] - self.source[j];
                if e.is_zero() {
                    continue;
                }
                if expected < 0 || e.degree() != expected {
                    return Err(PslError::DegreeMismatch {
                        row: i,
                        col: j,
                        expected,
                        found: e.degree(),
                    });
                }
            }
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        for i in 0..self.target.len() {
            for j in 0..self.source.len() {
                let d = self.target[i] - self.source[j];
                if self.entries[i][j].degree() != d {
                    self.entries[i][j] = Form::zero(self.field, d);
                }
            }
        }
        self
    }

    pub fn field(&self) -> F {
        self.field
    }
    pub fn source(&self) -> &[i32] {
        &self.source
    }
    pub fn target(&self) -> &[i32] {
        &self.target
    }
    pub fn rows(&self) -> usize {
        self.target.len()
    }
    pub fn cols(&self) -> usize {
        self.source.len()
    }
    pub fn entry(&self, i: usize, j: usize) -> &Form<F> {
        &self.entries[i][j]
    }
    pub fn entries(&self) -> &[Vec<Form<F>>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    /// `(r, chi)` of the Hilbert polynomial `r t + chi` of the cokernel.
    pub fn hilbert_polynomial(&self) -> Result<(i64, i64)> {
        if self.source.len() != self.target.len() {
            return Err(PslError::NotOneDimensional {
                sources: self.source.len(),
                targets: self.target.len(),
            });
        }
        let r: i64 = self.target.iter().map(|&b| b as i64).sum::<i64>()
            - self.source.iter().map(|&a| a as i64).sum::<i64>();
        let c = |d: i32| {
            let d = d as i64;
            (d + 1) * (d + 2) / 2
        };
        let chi = self.target.iter().map(|&b| c(b)).sum::<i64>()
            - self.source.iter().map(|&a| c(a)).sum::<i64>();
        Ok((r, chi))
    }

    /// Minor on the given rows and columns (equal lengths), by Laplace
    /// expansion along the first row.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Form<F> {
        assert_eq!(rows.len(), cols.len());
        let deg: i32 = rows.iter().map(|&i| self.target[i]).sum::<i32>()
            - cols.iter().map(|&j| self.source[j]).sum::<i32>();
        let mut acc = Form::zero(self.field, deg);
        if rows.is_empty() {
            return Form::constant(self.field, self.field.one());
        }
        let i0 = rows[0];
        for (pos, &j) in cols.iter().enumerate() {
            let e = &self.entries[i0][j];
            if e.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let sub = self.minor(&rows[1..], &rest_cols);
            if sub.is_zero() {
                continue;
            }
            let term = e.mul(&sub);
            acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    pub fn determinant(&self) -> Result<Form<F>> {
        if self.rows() != self.cols() {
            return Err(PslError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let idx: Vec<usize> = (0..self.rows()).collect();
        Ok(self.minor(&idx, &idx))
    }

    /// All maximal minors, indexed by lexicographically ordered subsets of
    /// the longer side.
    pub fn maximal_minors(&self) -> Vec<Form<F>> {
        let (r, c) = (self.rows(), self.cols());
        let all_rows: Vec<usize> = (0..r).collect();
        let all_cols: Vec<usize> = (0..c).collect();
        if c <= r {
            combinations(r, c)
                .into_iter()
                .map(|rows| self.minor(&rows, &all_cols))
                .collect()
        } else {
            combinations(c, r)
                .into_iter()
                .map(|cols| self.minor(&all_rows, &cols))
                .collect()
        }
    }

    /// Injective as a map of sheaves: some maximal minor is nonzero and there
    /// are no more columns than rows.
    pub fn is_injective(&self) -> bool {
        if self.cols() > self.rows() {
            return false;
        }
        self.maximal_minors().iter().any(|m| !m.is_zero())
    }

    /// Presentation of the dual sheaf: twists `-b-3 -> -a-3`, transposed
    /// entries.
    pub fn dualize(&self) -> Self {
        let source = self.target.iter().map(|b| -b - 3).collect();
        let target = self.source.iter().map(|a| -a - 3).collect();
        let entries = (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        Self {
            field: self.field,
            source,
            target,
            entries,
        }
    }

    pub fn twist(&self, n: i32) -> Self {
        Self {
            field: self.field,
            source: self.source.iter().map(|a| a + n).collect(),
            target: self.target.iter().map(|b| b + n).collect(),
            entries: self.entries.clone(),
        }
    }

    /// The induced map `H^0(A(n)) -> H^0(B(n))` in monomial coordinates;
    /// columns are grouped by source summand, rows by target summand.
    pub fn section_matrix(&self, n: i32) -> Matrix<F> {
        let col_dims: Vec<usize> = self.source.iter().map(|a| monomial_count(a + n)).collect();
        let row_dims: Vec<usize> = self.target.iter().map(|b| monomial_count(b + n)).collect();
        let mut m = Matrix::zeros(self.field, row_dims.iter().sum(), col_dims.iter().sum());
        let mut r0 = 0;
        for (i, &rd) in row_dims.iter().enumerate() {
            let mut c0 = 0;
            for (j, &cd) in col_dims.iter().enumerate() {
                let e = &self.entries[i][j];
                if rd > 0 && cd > 0 && !e.is_zero() {
                    let block = multiplication_map(e, self.source[j] + n);
                    for r in 0..rd {
                        for c in 0..cd {
                            m.set(r0 + r, c0 + c, block.get(r, c).clone());
                        }
                    }
                }
                c0 += cd;
            }
            r0 += rd;
        }
        m
    }

    /// Sub-morphism on the given target rows and source columns.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            field: self.field,
            source: cols.iter().map(|&j| self.source[j]).collect(),
            target: rows.iter().map(|&i| self.target[i]).collect(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// True when every entry has degree exactly one.
    pub fn is_linear(&self) -> bool {
        self.target
            .iter()
            .all(|b| self.source.iter().all(|a| b - a == 1))
    }

    /// Multiplicities of runs of equal twists, e.g. `[-2,-2,-1] -> [2,1]`.
    pub fn source_groups(&self) -> Vec<usize> {
        runs(&self.source)
    }

    pub fn target_groups(&self) -> Vec<usize> {
        runs(&self.target)
    }
}

fn runs(twists: &[i32]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (k, t) in twists.iter().enumerate() {
        if k > 0 && twists[k - 1] == *t {
            *out.last_mut().expect("nonempty") += 1;
        } else {
            out.push(1);
        }
    }
    out
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Rank of a list of forms of one degree, as vectors of coefficients.
pub fn forms_rank<F: Field>(forms: &[Form<F>]) -> usize {
    let Some(first) = forms.first() else {
        return 0;
    };
    let field = first.field();
    let rows: Vec<Vec<F::Elem>> = forms.iter().map(|f| f.coeffs().to_vec()).collect();
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        panic!("forms_rank needs forms of one degree");
    }
    if rows[0].is_empty() {
        return 0;
    }
    Matrix::from_rows(field, rows).expect("rectangular").rank()
}
