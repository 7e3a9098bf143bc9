// SPDX-License-Identifier: Apache-2.0

use super::SheafMorphism;
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::Form;

/// `F = coker(phi)` for an injective `phi` with one-dimensional cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafPresentation<F: Field> {
    phi: SheafMorphism<F>,
    r: i64,
    chi: i64,
    support: Option<Form<F>>,
}

impl<F: Field> SheafPresentation<F> {
    pub fn new(phi: SheafMorphism<F>) -> Result<Self> {
        let (r, chi) = phi.hilbert_polynomial()?;
        if r <= 0 {
            return Err(PslError::NonPositiveMultiplicity(r));
        }
        let support = phi.determinant()?;
        if support.is_zero() {
            return Err(PslError::NotInjective);
        }
        Ok(Self {
            phi,
            r,
            chi,
            support: Some(support),
        })
    }

    pub fn phi(&self) -> &SheafMorphism<F> {
        &self.phi
    }
    pub fn field(&self) -> F {
        self.phi.field()
    }
    /// Multiplicity.
    pub fn r(&self) -> i64 {
        self.r
    }
    /// Euler characteristic.
    pub fn chi(&self) -> i64 {
        self.chi
    }
    pub fn hilbert_polynomial(&self) -> (i64, i64) {
        (self.r, self.chi)
    }
    /// Support curve `det(phi)`.
    pub fn support(&self) -> Option<&Form<F>> {
        self.support.as_ref()
    }

    /// Presentation of `F^D`.
    pub fn dual(&self) -> Self {
        Self {
            phi: self.phi.dualize(),
            r: self.r,
            chi: -self.chi,
            support: self.support.clone(),
        }
    }

    /// Presentation of `F(n)`.
    pub fn twist(&self, n: i32) -> Self {
        Self {
            phi: self.phi.twist(n),
            r: self.r,
            chi: self.chi + self.r * n as i64,
            support: self.support.clone(),
        }
    }

    pub fn into_phi(self) -> SheafMorphism<F> {
        self.phi
    }
}
