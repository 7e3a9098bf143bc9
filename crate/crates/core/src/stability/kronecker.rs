// SPDX-License-Identifier: Apache-2.0

use super::{Certainty, StabilityVerdict, Status, Witness};
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::sheaf::SheafMorphism;
use crate::subspace::{enumerate_all, Subspace};

/// `tau: F^m (x) L -> F^n` given by `q = dim L` slices of shape `n x m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerModule<F: Field> {
    field: F,
    m: usize,
    n: usize,
    slices: Vec<Matrix<F>>,
}

impl<F: Field> KroneckerModule<F> {
    pub fn new(field: F, m: usize, n: usize, slices: Vec<Matrix<F>>) -> Result<Self> {
        if m == 0 || n == 0 || slices.is_empty() {
            return Err(PslError::ShapeMismatch("empty Kronecker module".into()));
        }
        if slices.iter().any(|s| s.rows() != n || s.cols() != m) {
            return Err(PslError::ShapeMismatch(format!("slices must be {n}x{m}")));
        }
        Ok(Self { field, m, n, slices })
    }

    /// Slices of a morphism with linear entries; slice `c` holds the
    /// `x_c` coefficients.
    pub fn from_linear(phi: &SheafMorphism<F>) -> Result<Self> {
        if !phi.is_linear() {
            return Err(PslError::ShapeMismatch("entries must all be linear".into()));
        }
        let field = phi.field();
        let slices = (0..3)
            .map(|c| Matrix::from_fn(field, phi.rows(), phi.cols(), |i, j| phi.entry(i, j).coeffs()[c].clone()))
            .collect();
        Self::new(field, phi.cols(), phi.rows(), slices)
    }

    pub fn field(&self) -> F {
        self.field
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> usize {
        self.slices.len()
    }
    pub fn slices(&self) -> &[Matrix<F>] {
        &self.slices
    }

    /// Span of all slice images of `h`.
    pub fn image_span(&self, h: &Subspace<F>) -> Subspace<F> {
        let vecs = h
            .basis()
            .iter()
            .flat_map(|v| self.slices.iter().map(move |s| s.mul_vec(v)))
            .collect();
        Subspace::span(self.field, self.n, vecs)
    }

    pub fn scaled(&self, c: &F::Elem) -> Self {
        Self {
            slices: self.slices.iter().map(|s| s.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// `g_target . tau . g_source` slice by slice.
    pub fn transformed(&self, g_target: &Matrix<F>, g_source: &Matrix<F>) -> Self {
        Self {
            slices: self.slices.iter().map(|s| g_target.mul(s).mul(g_source)).collect(),
            ..self.clone()
        }
    }
}

/// Exhaustive test over all nonzero subspaces `H` of F_q^m: semistable iff
/// `m dim K >= n dim H` for `K` the span of slice images, stable iff strict
/// away from `(H, K) = (F^m, F^n)`. The first violation in enumeration order
/// is the witness.
pub fn kronecker_semistable<F: Field>(tau: &KroneckerModule<F>, budget: u128) -> Result<StabilityVerdict<F>> {
    let field = tau.field;
    let (m, n) = (tau.m, tau.n);
    let mut equality: Option<(Subspace<F>, Subspace<F>)> = None;
    for h in enumerate_all(m, 1..=m, field, budget)? {
        let k = tau.image_span(&h);
        let (lhs, rhs) = (m * k.dim(), n * h.dim());
        if lhs < rhs {
            return Ok(StabilityVerdict {
                status: Status::Unstable,
                certainty: Certainty::Exact,
                field: field.spec(),
                witness: Some(Witness::Kronecker { h, k }),
            });
        }
        if lhs == rhs && !(h.is_full() && k.is_full()) && equality.is_none() {
            equality = Some((h, k));
        }
    }
    Ok(match equality {
        Some((h, k)) => StabilityVerdict {
            status: Status::StrictlySemistable,
            certainty: Certainty::Exact,
            field: field.spec(),
            witness: Some(Witness::Kronecker { h, k }),
        },
        None => StabilityVerdict {
            status: Status::Stable,
            certainty: Certainty::Exact,
            field: field.spec(),
            witness: None,
        },
    })
}

/// Re-checks a Kronecker witness from scratch: `K` contains every slice
/// image of `H`, and the slope relation matches the claimed status.
pub fn verify_kronecker_witness<F: Field>(
    tau: &KroneckerModule<F>,
    h: &Subspace<F>,
    k: &Subspace<F>,
    status: Status,
) -> bool {
    if h.dim() == 0 {
        return false;
    }
    let closed = h
        .basis()
        .iter()
        .all(|v| tau.slices.iter().all(|s| k.contains(&s.mul_vec(v))));
    let (lhs, rhs) = (tau.m * k.dim(), tau.n * h.dim());
    closed
        && match status {
            Status::Unstable => lhs < rhs,
            Status::StrictlySemistable => lhs == rhs && !(h.is_full() && k.is_full()),
            _ => false,
        }
}

/// `dim N(q, m, n) = q m n - m^2 - n^2 + 1` when `x_q < m/n < 1/x_q`, i.e.
/// when `m^2 - q m n + n^2 < 0`; `None` otherwise.
pub fn kronecker_moduli_dim(q: u64, m: u64, n: u64) -> Option<i64> {
    let (q, m, n) = (q as i64, m as i64, n as i64);
    let e = q * m * n - m * m - n * n;
    if e > 0 {
        Some(e + 1)
    } else {
        None
    }
}
