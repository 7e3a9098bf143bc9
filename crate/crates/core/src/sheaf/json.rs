// SPDX-License-Identifier: Apache-2.0
//! Morphism interchange format:
//! `{"field": "Q" | {"Fp": p}, "source": [..], "target": [..], "entries": [[..]]}`.

use serde::{Deserialize, Serialize};

use super::SheafMorphism;
use crate::error::{PslError, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::form::Form;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub field: FieldSpec,
    pub source: Vec<i32>,
    pub target: Vec<i32>,
    pub entries: Vec<Vec<String>>,
}

impl MorphismJson {
    pub fn parse_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| PslError::Parse(e.to_string()))
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn parse_with<F: Field>(&self, field: F) -> Result<SheafMorphism<F>> {
        if self.entries.len() != self.target.len() {
            return Err(PslError::ShapeMismatch(format!(
                "{} entry rows for {} targets",
                self.entries.len(),
                self.target.len()
            )));
        }
        let mut rows = Vec::with_capacity(self.entries.len());
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.source.len() {
                return Err(PslError::ShapeMismatch(format!(
                    "row {i} has {} entries for {} sources",
                    row.len(),
                    self.source.len()
                )));
            }
            let mut out = Vec::with_capacity(row.len());
            for (j, s) in row.iter().enumerate() {
                let expected = self.target[i] - self.source[j];
                let form = Form::parse(field, s, None).or_else(|_| Form::parse(field, s, Some(expected)))?;
                out.push(form);
            }
            rows.push(out);
        }
        SheafMorphism::new(field, self.source.clone(), self.target.clone(), rows)
    }
}

impl<F: Field> SheafMorphism<F> {
    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            field: self.field().spec(),
            source: self.source().to_vec(),
            target: self.target().to_vec(),
            entries: self
                .entries()
                .iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
        }
    }
}

/// A morphism over a field chosen at run time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMorphism {
    Q(SheafMorphism<Rationals>),
    Fp(SheafMorphism<PrimeField>),
}

impl AnyMorphism {
    pub fn from_json(doc: &MorphismJson) -> Result<Self> {
        match doc.field.validate()? {
            FieldSpec::Rationals => Ok(AnyMorphism::Q(doc.parse_with(Rationals)?)),
            FieldSpec::PrimeField(p) => Ok(AnyMorphism::Fp(doc.parse_with(PrimeField::new(p)?)?)),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_json(&MorphismJson::parse_str(s)?)
    }

    pub fn to_json(&self) -> MorphismJson {
        match self {
            AnyMorphism::Q(m) => m.to_json(),
            AnyMorphism::Fp(m) => m.to_json(),
        }
    }
}
