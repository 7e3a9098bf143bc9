// SPDX-License-Identifier: Apache-2.0
//! Stability of Kronecker modules, polarized stability of morphisms between
//! sums of line bundles, and the sheaf-level criteria built on them.

mod criteria;
mod kronecker;
mod polarized;

pub use criteria::{all_minors_nonzero, minors_criterion_23, reducibility_44, stability_5c};
pub use kronecker::{kronecker_moduli_dim, kronecker_semistable, verify_kronecker_witness, KroneckerModule};
pub use polarized::{
    g_semistable, gred_semistable, minimal_targets, verify_polarized_witness, GMode, Polarization,
};

use serde::Serialize;
use serde_json::{json, Value};

use crate::field::{Field, FieldSpec};
use crate::form::Form;
use crate::sheaf::SheafMorphism;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Stable,
    StrictlySemistable,
    /// Semistable; stable versus strictly semistable not decided.
    Semistable,
    Unstable,
}

impl Status {
    pub fn is_semistable(self) -> bool {
        !matches!(self, Status::Unstable)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certainty {
    Exact,
    /// Only instability can be certified; a pass means none was found.
    OneSided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<F: Field> {
    /// Subspaces `H` of the source and `K` of the target with `K` containing
    /// every slice image of `H`.
    Kronecker { h: Subspace<F>, k: Subspace<F> },
    /// Subspace tuples `(M_i)`, `(N_j)` with `phi(sum E_i (x) M_i)` inside
    /// `sum F_j (x) N_j`.
    Polarized {
        m: Vec<Subspace<F>>,
        n: Vec<Subspace<F>>,
        configuration: Option<String>,
        translate: Option<SheafMorphism<F>>,
    },
    /// `phi12` divides the named entry with the given quotient.
    Divisor { entry: String, quotient: Form<F> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict<F: Field> {
    pub status: Status,
    pub certainty: Certainty,
    pub field: FieldSpec,
    pub witness: Option<Witness<F>>,
}

impl<F: Field> StabilityVerdict<F> {
    pub fn is_stable(&self) -> bool {
        self.status == Status::Stable
    }

    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            None => Value::Null,
            Some(Witness::Kronecker { h, k }) => json!({
                "kind": "kronecker",
                "H": h.to_strings(),
                "K": k.to_strings(),
            }),
            Some(Witness::Polarized {
                m,
                n,
                configuration,
                translate,
            }) => json!({
                "kind": "polarized",
                "M": m.iter().map(|s| s.to_strings()).collect::<Vec<_>>(),
                "N": n.iter().map(|s| s.to_strings()).collect::<Vec<_>>(),
                "dims_M": m.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                "dims_N": n.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                "configuration": configuration,
                "translate": translate.as_ref().map(|t| t.to_json()),
            }),
            Some(Witness::Divisor { entry, quotient }) => json!({
                "kind": "divisor",
                "entry": entry,
                "quotient": quotient.to_string(),
            }),
        };
        json!({
            "status": self.status,
            "certainty": self.certainty,
            "field": self.field,
            "witness": witness,
        })
    }
}
