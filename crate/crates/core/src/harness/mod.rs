// SPDX-License-Identifier: Apache-2.0
//! Sampling of stratum members and the large scans run over them.
//!
//! Every trial draws from its own ChaCha8 stream `(seed, stream)`, so a scan
//! gives byte-identical reports whatever the number of worker threads.

mod render;
mod sampling;
mod scans;

pub use render::{render_census_table, render_delta_table, render_scan_table, shape_string};
pub use sampling::{row_predicate, sample_stratum, satisfies_row_predicate, MAX_RETRIES};
pub use scans::{census, clifford_bound_doubled, clifford_scan, delta_check, vanishing_scan};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{PslError, Result};
use crate::field::FieldSpec;
use crate::sheaf::MorphismJson;

/// Version of every JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// Independent generator for one trial.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `body` with `$f` bound to the concrete field named by a
/// [`FieldSpec`].
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $crate::field::FieldSpec::validate($spec)? {
            $crate::field::FieldSpec::Rationals => {
                let $f = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldSpec::PrimeField(p) => {
                let $f = $crate::field::PrimeField::new(p)?;
                $body
            }
        }
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    pub field: FieldSpec,
    /// Samples per Euler characteristic (per row for the census).
    pub trials: u64,
    pub seed: u64,
    pub chi_list: Vec<i64>,
}

impl ScanConfig {
    pub fn new(field: FieldSpec, trials: u64, seed: u64, chi_list: Vec<i64>) -> Result<Self> {
        if trials == 0 {
            return Err(PslError::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(&chi) = chi_list.iter().find(|c| !(0..=4).contains(*c)) {
            return Err(PslError::InvalidConfig(format!("chi {chi} outside 0..=4")));
        }
        Ok(Self {
            field: field.validate()?,
            trials,
            seed,
            chi_list,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.field, self.trials, self.seed, self.chi_list.clone()).map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub h0: usize,
    pub h1: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueCount {
    pub value: usize,
    pub count: u64,
}

/// What one Euler characteristic's samples looked like.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiSummary {
    pub chi: i64,
    pub samples: u64,
    /// `(h^0(F), h^1(F))` frequencies.
    pub pairs: Vec<PairCount>,
    /// `h^0(F(-1))` frequencies.
    pub h0_fm1: Vec<ValueCount>,
    /// Samples per row.
    pub rows: Vec<RowCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCount {
    pub row: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub chi: i64,
    pub row: String,
    pub trial: u64,
    pub claim: String,
    pub h0: usize,
    pub h1: usize,
    pub h0_fm1: usize,
    pub morphism: MorphismJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityCase {
    pub chi: i64,
    pub row: String,
    pub h0: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exhaustion {
    pub row: String,
    pub predicate: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub scan: String,
    pub config: ScanConfig,
    pub per_chi: Vec<ChiSummary>,
    pub violations: Vec<Violation>,
    pub equality_cases: Vec<EqualityCase>,
    pub exhausted: Vec<Exhaustion>,
    /// Filled in only on request; reports stay reproducible otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl ScanReport {
    pub fn exit_code(&self) -> i32 {
        exit_code(!self.violations.is_empty(), !self.exhausted.is_empty())
    }

    pub fn samples(&self) -> u64 {
        self.per_chi.iter().map(|c| c.samples).sum()
    }
}

fn exit_code(violations: bool, exhausted: bool) -> i32 {
    if violations {
        EXIT_VIOLATIONS
    } else if exhausted {
        EXIT_EXHAUSTED
    } else {
        EXIT_CLEAN
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleCount {
    pub triple: (usize, usize, usize),
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub id: String,
    pub chi: i64,
    pub codim: usize,
    pub resolution: String,
    pub expected_triple: (usize, usize, usize),
    pub samples: u64,
    /// Samples classified into this row.
    pub matches: u64,
    /// Samples whose resolution shape is this row's.
    pub shape_matches: u64,
    pub no_matching_stratum: u64,
    pub exhausted: u64,
    pub observed: Vec<TripleCount>,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub config: ScanConfig,
    pub rows: Vec<CensusRow>,
    pub rows_passed: usize,
    pub rows_total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl CensusReport {
    pub fn exit_code(&self) -> i32 {
        let exhausted = self.rows.iter().any(|r| r.exhausted > 0);
        let mismatched = self.rows.iter().any(|r| r.matches + r.exhausted != r.samples);
        exit_code(mismatched, exhausted)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaFailure {
    pub trial: u64,
    pub morphism: MorphismJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub schema_version: u32,
    pub config: ScanConfig,
    pub trials: u64,
    pub failures: Vec<DeltaFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl DeltaReport {
    pub fn exit_code(&self) -> i32 {
        exit_code(!self.failures.is_empty(), false)
    }
}
