// SPDX-License-Identifier: Apache-2.0
//! Subspaces of F^m in canonical echelon form, and exhaustive enumeration of
//! all k-dimensional subspaces over a prime field.

use crate::error::{PslError, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// Default cap on the number of subspaces (or subspace tuples) visited.
pub const DEFAULT_BUDGET: u128 = 100_000;

/// A subspace of F^ambient_dim, stored as the nonzero rows of its reduced
/// row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient_dim: usize,
    basis: Vec<Vec<F::Elem>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, ambient_dim: usize) -> Self {
        Self {
            field,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(field: F, ambient_dim: usize) -> Self {
        Self::span(field, ambient_dim, Matrix::identity(field, ambient_dim).to_rows())
    }

    /// Span of arbitrary vectors.
    pub fn span(field: F, ambient_dim: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        if vectors.is_empty() || ambient_dim == 0 {
            return Self::zero(field, ambient_dim);
        }
        let m = Matrix::from_rows(field, vectors).expect("vectors share a length");
        assert_eq!(m.cols(), ambient_dim, "vector length differs from ambient dimension");
        let rref = m.rref();
        let basis = (0..rref.pivots.len())
            .map(|r| rref.matrix.row(r).to_vec())
            .collect();
        Self {
            field,
            ambient_dim,
            basis,
        }
    }

    pub fn field(&self) -> F {
        self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Subspace::span(self.field, self.ambient_dim, rows).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Basis rows rendered with the field's scalar syntax.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.basis
            .iter()
            .map(|v| v.iter().map(|x| self.field.format(x)).collect())
            .collect()
    }
}

/// Gaussian binomial [m choose k]_q, saturating at `u128::MAX`.
pub fn gaussian_binomial(m: usize, k: usize, q: u64) -> u128 {
    if k > m {
        return 0;
    }
    // q-Pascal recurrence; c[i][j] counts j-dim subspaces of F_q^i.
    let q = q as u128;
    let mut c = vec![vec![0u128; k + 1]; m + 1];
    c[0][0] = 1;
    for i in 1..=m {
        c[i][0] = 1;
        for j in 1..=k.min(i) {
            // [i, j] = [i-1, j-1] + q^j [i-1, j]
            let qj = q.saturating_pow(j as u32);
            c[i][j] = c[i - 1][j - 1].saturating_add(qj.saturating_mul(c[i - 1][j]));
        }
    }
    c[m][k]
}

/// Iterator over the k-dimensional subspaces of F_q^m, one canonical echelon
/// representative each. Order: pivot sets lexicographically, then free
/// entries as an odometer over the field elements.
pub struct SubspaceIter<F: Field> {
    field: F,
    elems: Vec<F::Elem>,
    m: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<usize>,
    done: bool,
}

pub fn enumerate_subspaces<F: Field>(
    m: usize,
    k: usize,
    field: F,
    budget: u128,
) -> Result<SubspaceIter<F>> {
    let q = field.order().ok_or(PslError::NotPrimeField)?;
    let count = gaussian_binomial(m, k, q);
    if count > budget {
        return Err(PslError::BudgetExceeded { count, budget });
    }
    let elems = field.elements().ok_or(PslError::NotPrimeField)?;
    let mut it = SubspaceIter {
        field,
        elems,
        m,
        pivots: (0..k).collect(),
        free: Vec::new(),
        counter: Vec::new(),
        done: k > m,
    };
    if !it.done {
        it.reset_free();
    }
    Ok(it)
}

/// Subspaces of every dimension in `dims`, in increasing dimension order.
pub fn enumerate_all<F: Field>(
    m: usize,
    dims: std::ops::RangeInclusive<usize>,
    field: F,
    budget: u128,
) -> Result<Vec<Subspace<F>>> {
    let q = field.order().ok_or(PslError::NotPrimeField)?;
    let count: u128 = dims
        .clone()
        .map(|k| gaussian_binomial(m, k, q))
        .fold(0u128, |a, b| a.saturating_add(b));
    if count > budget {
        return Err(PslError::BudgetExceeded { count, budget });
    }
    let mut out = Vec::with_capacity(count as usize);
    for k in dims {
        out.extend(enumerate_subspaces(m, k, field, budget)?);
    }
    Ok(out)
}

impl<F: Field> SubspaceIter<F> {
    fn reset_free(&mut self) {
        self.free.clear();
        for (r, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.m {
                if !self.pivots.contains(&c) {
                    self.free.push((r, c));
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn next_pivot_set(&mut self) -> bool {
        let k = self.pivots.len();
        let m = self.m;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < m - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Subspace<F> {
        let f = self.field;
        let mut basis: Vec<Vec<F::Elem>> =
            vec![vec![f.zero(); self.m]; self.pivots.len()];
        for (r, &p) in self.pivots.iter().enumerate() {
            basis[r][p] = f.one();
        }
        for (&(r, c), &i) in self.free.iter().zip(&self.counter) {
            basis[r][c] = self.elems[i].clone();
        }
        Subspace {
            field: f,
            ambient_dim: self.m,
            basis,
        }
    }
}

impl<F: Field> Iterator for SubspaceIter<F> {
    type Item = Subspace<F>;

    fn next(&mut self) -> Option<Subspace<F>> {
        if self.done {
            return None;
        }
        let out = self.current();
        // advance the odometer, then the pivot set
        let q = self.elems.len();
        let mut carried = true;
        for c in self.counter.iter_mut() {
            *c += 1;
            if *c < q {
                carried = false;
                break;
            }
            *c = 0;
        }
        if carried {
            if self.next_pivot_set() {
                self.reset_free();
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}
