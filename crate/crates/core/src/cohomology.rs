// SPDX-License-Identifier: Apache-2.0
//! Cohomology of `F = coker(phi)` and its twists by exact linear algebra on
//! section spaces of the free terms.

use serde::Serialize;

use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::{monomial_basis, monomial_count, monomial_index};
use crate::linalg::Matrix;
use crate::sheaf::{SheafMorphism, SheafPresentation};

/// `h^i(O(d))` on the plane.
pub fn h_line_bundle(i: u8, d: i32) -> usize {
    match i {
        0 => monomial_count(d),
        2 => monomial_count(-d - 3),
        _ => 0,
    }
}

/// `H^0(F(n))` as a quotient of `H^0(B(n))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace<F: Field> {
    pub twist: i32,
    pub dimension: usize,
    /// Coset representatives: unit vectors on the non-pivot coordinates of
    /// the image echelon form.
    pub basis: Vec<Vec<F::Elem>>,
}

pub fn h0<F: Field>(f: &SheafPresentation<F>, n: i32) -> SectionSpace<F> {
    section_space(f.phi(), n)
}

pub fn h0_dim<F: Field>(f: &SheafPresentation<F>, n: i32) -> usize {
    let p = f.phi().section_matrix(n);
    p.rows() - p.rank()
}

/// `h^1(F(n)) = h^2(A(n)) - rank H^2(phi(n))`, the `H^2` map being the
/// transpose of the section map of the dual presentation at twist `-n`.
pub fn h1<F: Field>(f: &SheafPresentation<F>, n: i32) -> usize {
    h1_phi(f.phi(), n)
}

pub(crate) fn h1_phi<F: Field>(phi: &SheafMorphism<F>, n: i32) -> usize {
    let h2a: usize = phi.source().iter().map(|a| h_line_bundle(2, a + n)).sum();
    h2a - phi.dualize().section_matrix(-n).rank()
}

pub(crate) fn section_space<F: Field>(phi: &SheafMorphism<F>, n: i32) -> SectionSpace<F> {
    let field = phi.field();
    let p = phi.section_matrix(n);
    let ambient = p.rows();
    let image = p.image_basis();
    let pivots: Vec<usize> = image
        .basis()
        .iter()
        .map(|v| v.iter().position(|x| !field.is_zero(x)).expect("basis rows are nonzero"))
        .collect();
    let basis: Vec<Vec<F::Elem>> = (0..ambient)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut v = vec![field.zero(); ambient];
            v[c] = field.one();
            v
        })
        .collect();
    SectionSpace {
        twist: n,
        dimension: basis.len(),
        basis,
    }
}

/// Multiplies a section of `sum O(b_i + n)` by `x_var`.
fn times_var<F: Field>(field: F, target: &[i32], n: i32, v: &[F::Elem], var: usize) -> Vec<F::Elem> {
    let out_len: usize = target.iter().map(|b| monomial_count(b + n + 1)).sum();
    let mut out = vec![field.zero(); out_len];
    let (mut src0, mut dst0) = (0, 0);
    for b in target {
        let d = b + n;
        for (k, m) in monomial_basis(d).into_iter().enumerate() {
            let c = &v[src0 + k];
            if field.is_zero(c) {
                continue;
            }
            let mut mm = m;
            mm[var] += 1;
            out[dst0 + monomial_index(mm)] = c.clone();
        }
        src0 += monomial_count(d);
        dst0 += monomial_count(d + 1);
    }
    out
}

/// Rank of `s -> (x_i s)` from `H^0(F(n))^3` to `H^0(F(n+1))`.
fn euler_contraction_rank<F: Field>(phi: &SheafMorphism<F>, n: i32) -> (usize, usize) {
    let field = phi.field();
    let sections = section_space(phi, n);
    let p1 = phi.section_matrix(n + 1);
    if sections.dimension == 0 {
        return (0, 0);
    }
    let cols: Vec<Vec<F::Elem>> = sections
        .basis
        .iter()
        .flat_map(|s| (0..3).map(move |var| (s, var)))
        .map(|(s, var)| times_var(field, phi.target(), n, s, var))
        .collect();
    let x = Matrix::from_rows(field, cols).expect("equal lengths").transpose();
    let rp = p1.rank();
    let rank = p1.hstack(&x).rank() - rp;
    (sections.dimension, rank)
}

/// `h^0(F (x) Omega^1(1))`: kernel of the Euler contraction
/// `H^0(F) (x) V* -> H^0(F(1))`.
pub fn h0_omega<F: Field>(f: &SheafPresentation<F>) -> usize {
    h0_omega_phi(f.phi())
}

pub(crate) fn h0_omega_phi<F: Field>(phi: &SheafMorphism<F>) -> usize {
    let (h0, rank) = euler_contraction_rank(phi, 0);
    3 * h0 - rank
}

/// `h^1(F (x) Omega^1(1)) = h^0(F (x) Omega^1(1)) - (2 chi - r)`.
pub fn h1_omega<F: Field>(f: &SheafPresentation<F>) -> Result<usize> {
    let h0w = h0_omega(f) as i64;
    let value = h0w - (2 * f.chi() - f.r());
    usize::try_from(value).map_err(|_| PslError::NegativeDimension {
        what: "h1(F (x) Omega^1(1))".into(),
        value,
    })
}

/// `h^1(F (x) Omega^1(1))` from the long exact sequence of the twisted Euler
/// sequence, without the Riemann-Roch shortcut:
/// `coker(H^0(F)^3 -> H^0(F(1)))` plus `ker(H^1(F)^3 -> H^1(F(1)))`, the
/// latter computed on the dual side as `H^0(F^D(-1)) -> H^0(F^D)^3`.
pub fn h1_omega_direct<F: Field>(f: &SheafPresentation<F>) -> usize {
    let phi = f.phi();
    let field = phi.field();
    let (_, mu0) = euler_contraction_rank(phi, 0);
    let coker_part = h0_dim(f, 1) - mu0;

    let dual = phi.dualize();
    let g_sections = section_space(&dual, -1);
    let h1f = h1_phi(phi, 0);
    let p = dual.section_matrix(0);
    let mu1 = if g_sections.dimension == 0 {
        0
    } else {
        let blocks = Matrix::zeros(field, 3 * p.rows(), 3 * p.cols());
        let mut diag = blocks;
        for k in 0..3 {
            for r in 0..p.rows() {
                for c in 0..p.cols() {
                    diag.set(k * p.rows() + r, k * p.cols() + c, p.get(r, c).clone());
                }
            }
        }
        let cols: Vec<Vec<F::Elem>> = g_sections
            .basis
            .iter()
            .map(|s| {
                (0..3)
                    .flat_map(|var| times_var(field, dual.target(), -1, s, var))
                    .collect()
            })
            .collect();
        let x = Matrix::from_rows(field, cols).expect("equal lengths").transpose();
        diag.hstack(&x).rank() - 3 * p.rank()
    };
    coker_part + (3 * h1f - mu1)
}

/// The six entries of the Beilinson tableau. `F (x) Omega^2(2) = F(-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub h0_fm1: usize,
    pub h1_fm1: usize,
    pub h0_fomega: usize,
    pub h1_fomega: usize,
    pub h0_f: usize,
    pub h1_f: usize,
}

impl CohomologyTable {
    /// `(h^0(F(-1)), h^0(F (x) Omega^1(1)), h^0(F))`.
    pub fn bottom_row(&self) -> [usize; 3] {
        [self.h0_fm1, self.h0_fomega, self.h0_f]
    }

    /// `(h^1(F(-1)), h^1(F (x) Omega^1(1)), h^1(F))`.
    pub fn top_row(&self) -> [usize; 3] {
        [self.h1_fm1, self.h1_fomega, self.h1_f]
    }

    /// Rows swapped and columns reversed.
    pub fn dual_swap(&self) -> Self {
        Self {
            h0_fm1: self.h1_f,
            h1_fm1: self.h0_f,
            h0_fomega: self.h1_fomega,
            h1_fomega: self.h0_fomega,
            h0_f: self.h1_fm1,
            h1_f: self.h0_fm1,
        }
    }

    /// Euler characteristics per column: `chi - r`, `2 chi - r`, `chi`.
    pub fn euler_ok(&self, r: i64, chi: i64) -> bool {
        let d = |a: usize, b: usize| a as i64 - b as i64;
        d(self.h0_fm1, self.h1_fm1) == chi - r
            && d(self.h0_fomega, self.h1_fomega) == 2 * chi - r
            && d(self.h0_f, self.h1_f) == chi
    }

    /// `(h^0(F(-1)), h^1(F), h^0(F (x) Omega^1(1)))`, the stratum invariant.
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.h0_fm1, self.h1_f, self.h0_fomega)
    }
}

pub fn beilinson_table<F: Field>(f: &SheafPresentation<F>) -> Result<CohomologyTable> {
    Ok(CohomologyTable {
        h0_fm1: h0_dim(f, -1),
        h1_fm1: h1(f, -1),
        h0_fomega: h0_omega(f),
        h1_fomega: h1_omega(f)?,
        h0_f: h0_dim(f, 0),
        h1_f: h1(f, 0),
    })
}

/// One term `C^position = sum O(twist)^multiplicity` of the Beilinson monad.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonadTerm {
    pub position: i32,
    /// `(twist, multiplicity)`, zero multiplicities omitted.
    pub summands: Vec<(i32, usize)>,
}

impl MonadTerm {
    pub fn rank(&self) -> usize {
        self.summands.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, twist: i32) -> usize {
        self.summands
            .iter()
            .filter(|(t, _)| *t == twist)
            .map(|(_, m)| m)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeilinsonReport {
    pub table: CohomologyTable,
    /// Terms at positions -2, -1, 0, 1.
    pub terms: Vec<MonadTerm>,
    pub monad_ranks: [usize; 4],
    /// `2 * sum (-1)^i P(C^i)(t)` as `(t^2, t, 1)` coefficients.
    pub doubled_alternating_sum: (i64, i64, i64),
    pub consistency: bool,
}

pub fn monad_terms(t: &CohomologyTable) -> Vec<MonadTerm> {
    let term = |position: i32, parts: &[(i32, usize)]| MonadTerm {
        position,
        summands: parts.iter().copied().filter(|(_, m)| *m > 0).collect(),
    };
    vec![
        term(-2, &[(-2, t.h0_fm1)]),
        term(-1, &[(-2, t.h1_fm1), (-1, t.h0_fomega)]),
        term(0, &[(-1, t.h1_fomega), (0, t.h0_f)]),
        term(1, &[(0, t.h1_f)]),
    ]
}

/// Doubled Hilbert polynomial `(t + d + 1)(t + d + 2)` of `O(d)`.
fn doubled_hilbert(d: i32) -> (i64, i64, i64) {
    let d = d as i64;
    (1, 2 * d + 3, (d + 1) * (d + 2))
}

pub fn monad_check<F: Field>(f: &SheafPresentation<F>) -> Result<BeilinsonReport> {
    let table = beilinson_table(f)?;
    let terms = monad_terms(&table);
    let mut sum = (0i64, 0i64, 0i64);
    for t in &terms {
        let sign = if t.position % 2 == 0 { 1 } else { -1 };
        for &(d, m) in &t.summands {
            let (a, b, c) = doubled_hilbert(d);
            let m = m as i64 * sign;
            sum = (sum.0 + m * a, sum.1 + m * b, sum.2 + m * c);
        }
    }
    let expected = (0, 2 * f.r(), 2 * f.chi());
    if sum != expected {
        return Err(PslError::InconsistentMonad {
            expected,
            found: sum,
        });
    }
    let monad_ranks = [terms[0].rank(), terms[1].rank(), terms[2].rank(), terms[3].rank()];
    Ok(BeilinsonReport {
        table,
        terms,
        monad_ranks,
        doubled_alternating_sum: sum,
        consistency: true,
    })
}
