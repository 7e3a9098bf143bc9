// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, PslError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PslError {
    #[error("invalid field: {0} is not a prime <= 97")]
    InvalidField(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("entry ({row}, {col}) has degree {found}, expected {expected}")]
    DegreeMismatch {
        row: usize,
        col: usize,
        expected: i32,
        found: i32,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty twist list")]
    EmptyTwistList,
    #[error("cokernel is not one-dimensional ({sources} sources, {targets} targets)")]
    NotOneDimensional { sources: usize, targets: usize },
    #[error("determinant requires a square matrix ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("form must be nonzero")]
    ZeroForm,
    #[error("forms {first} and {second} are linearly dependent")]
    DependentForms { first: String, second: String },
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),
    #[error("morphism is not injective")]
    NotInjective,
    #[error("multiplicity must be positive, got {0}")]
    NonPositiveMultiplicity(i64),
    #[error("{what} would be negative ({value})")]
    NegativeDimension { what: String, value: i64 },
    #[error("monad alternating sum {found:?} differs from Hilbert data {expected:?}")]
    InconsistentMonad {
        expected: (i64, i64, i64),
        found: (i64, i64, i64),
    },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("enumeration needs {count} items, budget is {budget}; use a smaller field")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("malformed polarization: {0}")]
    MalformedPolarization(String),
    #[error("mode unavailable: {0}")]
    ModeUnavailable(String),
    #[error("out of stratum: {0}")]
    OutOfStratum(String),
    #[error("operation needs a prime field")]
    NotPrimeField,
    #[error("no stratum of M(4,{chi}) has cohomology triple {triple:?}")]
    NoMatchingStratum {
        chi: i64,
        triple: (usize, usize, usize),
    },
    #[error("multiplicity {0} is not covered by the stratum table")]
    UnsupportedMultiplicity(i64),
    #[error("group element is singular")]
    SingularGroupElement,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("genericity exhausted for {row}: predicate '{predicate}' kept failing")]
    GenericityExhausted { row: String, predicate: String },
}
