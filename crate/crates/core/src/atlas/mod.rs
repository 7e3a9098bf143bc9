// SPDX-License-Identifier: Apache-2.0
//! Strata of the moduli spaces M(4, chi), 0 < chi <= 4: table data,
//! classification of presentations, duality and dimension bookkeeping.

mod delta;

pub use delta::{delta_map, GroupElement42, QuadricPair, Tau};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cohomology::{h0_dim, h0_omega, h1, h_line_bundle};
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::sheaf::SheafPresentation;

/// One row of the stratum table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StratumDescriptor {
    pub id: &'static str,
    pub r: i64,
    pub chi: i64,
    /// `(h^0(F(-1)), h^1(F), h^0(F (x) Omega^1(1)))`.
    pub triple: (usize, usize, usize),
    pub source: &'static [i32],
    pub target: &'static [i32],
    pub codim: usize,
}

/// Dimension of every M(4, chi).
pub const MODULI_DIM: i64 = 17;

pub static STRATA: [StratumDescriptor; 9] = [
    StratumDescriptor { id: "X0(4,1)", r: 4, chi: 1, triple: (0, 0, 0), source: &[-2, -2, -2], target: &[-1, -1, 0], codim: 0 },
    StratumDescriptor { id: "X1(4,1)", r: 4, chi: 1, triple: (0, 1, 1), source: &[-3, -1], target: &[0, 0], codim: 2 },
    StratumDescriptor { id: "X0(4,2)", r: 4, chi: 2, triple: (0, 0, 0), source: &[-2, -2], target: &[0, 0], codim: 0 },
    StratumDescriptor { id: "X1(4,2)", r: 4, chi: 2, triple: (0, 0, 1), source: &[-2, -2, -1], target: &[-1, 0, 0], codim: 1 },
    StratumDescriptor { id: "X2(4,2)", r: 4, chi: 2, triple: (1, 1, 3), source: &[-3], target: &[1], codim: 3 },
    StratumDescriptor { id: "X0(4,3)", r: 4, chi: 3, triple: (0, 0, 2), source: &[-2, -1, -1], target: &[0, 0, 0], codim: 0 },
    StratumDescriptor { id: "X1(4,3)", r: 4, chi: 3, triple: (1, 0, 3), source: &[-2, -2], target: &[-1, 1], codim: 2 },
    StratumDescriptor { id: "X0(4,4)", r: 4, chi: 4, triple: (0, 0, 4), source: &[-1, -1, -1, -1], target: &[0, 0, 0, 0], codim: 0 },
    StratumDescriptor { id: "X1(4,4)", r: 4, chi: 4, triple: (1, 0, 4), source: &[-2, -1], target: &[0, 1], codim: 1 },
];

pub fn strata() -> &'static [StratumDescriptor] {
    &STRATA
}

pub fn rows_for_chi(chi: i64) -> Vec<&'static StratumDescriptor> {
    STRATA.iter().filter(|s| s.chi == chi).collect()
}

pub fn stratum_by_id(id: &str) -> Option<&'static StratumDescriptor> {
    STRATA.iter().find(|s| s.id == id)
}

/// The twist `n` with `chi + r n` in `(0, r]`.
pub fn normalizing_twist(r: i64, chi: i64) -> i64 {
    // smallest n with chi + r n > 0, which then lands in (0, r]
    Integer::div_floor(&(-chi), &r) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub row: StratumDescriptor,
    /// Twist applied to bring chi into (0, 4].
    pub twist: i64,
    pub chi: i64,
    pub triple: (usize, usize, usize),
    /// Whether the (twisted) presentation has the row's resolution shape,
    /// up to the order of the summands.
    pub shape_match: bool,
}

pub fn cohomology_triple<F: Field>(f: &SheafPresentation<F>) -> (usize, usize, usize) {
    (h0_dim(f, -1), h1(f, 0), h0_omega(f))
}

fn sorted(v: &[i32]) -> Vec<i32> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

pub fn classify<F: Field>(f: &SheafPresentation<F>) -> Result<ClassificationReport> {
    if f.r() != 4 {
        return Err(PslError::UnsupportedMultiplicity(f.r()));
    }
    let twist = normalizing_twist(f.r(), f.chi());
    let g = f.twist(twist as i32);
    let chi = g.chi();
    let triple = cohomology_triple(&g);
    let row = rows_for_chi(chi)
        .into_iter()
        .find(|s| s.triple == triple)
        .ok_or(PslError::NoMatchingStratum { chi, triple })?;
    let shape_match = sorted(g.phi().source()) == sorted(row.source) && sorted(g.phi().target()) == sorted(row.target);
    Ok(ClassificationReport {
        row: *row,
        twist,
        chi,
        triple,
        shape_match,
    })
}

/// `F -> F^D(1)`, normalized back into (0, 4]: row `k` of M(4, chi) goes to
/// row `k` of M(4, 4 - chi) (chi = 4 and chi = 2 pair with themselves).
pub fn duality_stratum_map(row: &StratumDescriptor) -> &'static StratumDescriptor {
    let chi = 4 - row.chi;
    let chi = chi + 4 * normalizing_twist(4, chi);
    let index = rows_for_chi(row.chi)
        .iter()
        .position(|s| s.id == row.id)
        .expect("row belongs to the table");
    rows_for_chi(chi)[index]
}

/// `F^D(1)` twisted back into (0, 4].
pub fn dual_normalized<F: Field>(f: &SheafPresentation<F>) -> SheafPresentation<F> {
    let g = f.dual().twist(1);
    let n = normalizing_twist(g.r(), g.chi());
    g.twist(n as i32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionAudit {
    pub id: &'static str,
    pub hom_dim: usize,
    pub aut_source: usize,
    pub aut_target: usize,
    /// `dim Aut(source) + dim Aut(target) - 1`.
    pub group_dim: usize,
    pub difference: i64,
    pub expected: i64,
    pub passes: bool,
}

/// `dim Hom(sum O(a_j), sum O(b_i)) = sum h^0(O(b_i - a_j))`.
pub fn hom_dim(source: &[i32], target: &[i32]) -> usize {
    target
        .iter()
        .flat_map(|b| source.iter().map(move |a| h_line_bundle(0, b - a)))
        .sum()
}

/// `dim Aut(sum O(c_k)) = sum_{k,l} h^0(O(c_k - c_l))`.
pub fn aut_dim(twists: &[i32]) -> usize {
    hom_dim(twists, twists)
}

pub fn stratum_dimension_audit(row: &StratumDescriptor) -> DimensionAudit {
    let hom = hom_dim(row.source, row.target);
    let (a, b) = (aut_dim(row.source), aut_dim(row.target));
    let group = a + b - 1;
    let difference = hom as i64 - group as i64;
    let expected = MODULI_DIM - row.codim as i64;
    DimensionAudit {
        id: row.id,
        hom_dim: hom,
        aut_source: a,
        aut_target: b,
        group_dim: group,
        difference,
        expected,
        passes: difference == expected,
    }
}

/// Vanishing thresholds for a semistable sheaf with Hilbert polynomial
/// `r t + chi`: `h^0(F(i)) = 0` for `i < h0_threshold`, `h^1(F(i)) = 0` for
/// `i > h1_threshold`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingBounds {
    pub h0_threshold: BigRational,
    pub h1_threshold: BigRational,
    /// Largest twist with guaranteed `h^0` vanishing.
    pub i_low: i64,
    /// Smallest twist with guaranteed `h^1` vanishing.
    pub i_high: i64,
}

impl VanishingBounds {
    pub fn to_json(&self) -> Value {
        json!({
            "h0_threshold": self.h0_threshold.to_string(),
            "h1_threshold": self.h1_threshold.to_string(),
            "i_low": self.i_low,
            "i_high": self.i_high,
        })
    }
}

pub fn vanishing_bounds(r: i64, chi: i64) -> VanishingBounds {
    assert!(r >= 1, "multiplicity must be positive");
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let t0 = q(3 - r, 2) - q(chi, r);
    let t1 = q(r - 3, 2) - q(chi, r);
    let i_low = t0.ceil().to_integer() - 1;
    let i_high = t1.floor().to_integer() + 1;
    VanishingBounds {
        h0_threshold: t0,
        h1_threshold: t1,
        i_low: i64::try_from(i_low).expect("small"),
        i_high: i64::try_from(i_high).expect("small"),
    }
}

/// Checks the vanishing ranges on a window of `width` twists past each
/// threshold.
pub fn vanishing_holds<F: Field>(f: &SheafPresentation<F>, width: i64) -> bool {
    let b = vanishing_bounds(f.r(), f.chi());
    (0..width).all(|k| h0_dim(f, (b.i_low - k) as i32) == 0)
        && (0..width).all(|k| h1(f, (b.i_high + k) as i32) == 0)
}
