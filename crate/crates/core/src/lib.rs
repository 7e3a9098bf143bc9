// SPDX-License-Identifier: Apache-2.0
//! Exact computations with coherent sheaves on the projective plane
//! presented as cokernels of morphisms between sums of line bundles:
//! cohomology, Beilinson tableaux, stability of the presenting morphisms and
//! the stratification of the moduli spaces M(4, chi).
//!
//! Everything is computed exactly, over the rationals or a prime field.

pub mod atlas;
pub mod cohomology;
pub mod error;
pub mod field;
pub mod form;
pub mod harness;
pub mod linalg;
pub mod sheaf;
pub mod stability;
pub mod subspace;

pub use error::{PslError, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use form::Form;
pub use linalg::Matrix;
pub use sheaf::{AnyMorphism, MorphismJson, SheafMorphism, SheafPresentation};
pub use subspace::Subspace;
