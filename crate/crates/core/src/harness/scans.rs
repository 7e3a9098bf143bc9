// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{
    sample_stratum, trial_rng, CensusReport, CensusRow, ChiSummary, DeltaFailure, DeltaReport, EqualityCase,
    Exhaustion, PairCount, RowCount, ScanConfig, ScanReport, TripleCount, ValueCount, Violation, SCHEMA_VERSION,
};
use crate::atlas::{
    classify, delta_map, rows_for_chi, strata, GroupElement42, StratumDescriptor,
};
use crate::cohomology::{h0_dim, h1};
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::form::Form;
use crate::sheaf::{w42, SheafPresentation};
use crate::with_field;

/// The O_C(1) row, the only one allowed to reach the Clifford bound.
const OC1_ROW: &str = "X2(4,2)";

fn stream(tag: u64, trial: u64) -> u64 {
    (tag << 48) | trial
}

struct Observed {
    row: &'static str,
    h0: usize,
    h1: usize,
    h0_fm1: usize,
    /// Claim broken by this sample, if any.
    broken: Option<&'static str>,
    equality: bool,
    morphism: Option<crate::sheaf::MorphismJson>,
}

enum Trial {
    Done(Observed),
    Exhausted { row: String, predicate: String },
}

/// `(source chi, twist)`: chi = 0 is reached from chi = 4 by `F(-1)`.
fn source_of(chi: i64) -> (i64, i32) {
    if chi == 0 {
        (4, -1)
    } else {
        (chi, 0)
    }
}

type Check = fn(chi: i64, row: &str, h0: usize, h1: usize, h0_fm1: usize) -> (Option<&'static str>, bool);

/// Samples `trials` sheaves with Euler characteristic `chi`, rows taken in
/// turn, and applies `check` to each.
fn run_chi<F: Field>(field: F, cfg: &ScanConfig, chi: i64, check: Check) -> Result<Vec<Trial>> {
    let (src, twist) = source_of(chi);
    let rows = rows_for_chi(src);
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let row = rows[(t % rows.len() as u64) as usize];
            let mut rng = trial_rng(cfg.seed, stream(chi as u64, t));
            let f = match sample_stratum(row, field, &mut rng) {
                Ok(f) => f.twist(twist),
                Err(PslError::GenericityExhausted { row, predicate }) => {
                    return Ok(Trial::Exhausted { row, predicate });
                }
                Err(e) => return Err(e),
            };
            let (h0, h1v, h0m) = (h0_dim(&f, 0), h1(&f, 0), h0_dim(&f, -1));
            let (broken, equality) = check(chi, row.id, h0, h1v, h0m);
            Ok(Trial::Done(Observed {
                row: row.id,
                h0,
                h1: h1v,
                h0_fm1: h0m,
                broken,
                equality,
                morphism: broken.map(|_| f.phi().to_json()),
            }))
        })
        .collect()
}

/// Twice the Clifford bound `1 + chi/2 + r(r - 3)/4` on `h^0(F)` for
/// semistable `F` with `h^1(F) > 0`.
pub fn clifford_bound_doubled(r: i64, chi: i64) -> i64 {
    2 + chi + r * (r - 3) / 2
}

fn clifford_check(chi: i64, row: &str, h0: usize, h1: usize, _h0_fm1: usize) -> (Option<&'static str>, bool) {
    if h1 == 0 {
        return (None, false);
    }
    let (lhs, rhs) = (2 * h0 as i64, clifford_bound_doubled(4, chi));
    if lhs > rhs {
        (Some("h0 <= 2 + chi/2"), false)
    } else if lhs == rhs && row != OC1_ROW {
        (Some("equality only at O_C(1)"), false)
    } else {
        (None, lhs == rhs)
    }
}

fn vanishing_check(chi: i64, row: &str, _h0: usize, h1: usize, h0_fm1: usize) -> (Option<&'static str>, bool) {
    match chi {
        1 if h1 > 1 => (Some("h1 <= 1 in M(4,1)"), false),
        2 if h1 > 0 && row != OC1_ROW => (Some("h1 = 0 in M(4,2) off O_C(1)"), false),
        2 if h1 > 0 => (None, true),
        4 if h0_fm1 > 1 => (Some("h0(F(-1)) <= 1 in M(4,4)"), false),
        _ => (None, false),
    }
}

fn summarize(scan: &str, cfg: &ScanConfig, results: Vec<(i64, Vec<Trial>)>) -> ScanReport {
    let mut per_chi = Vec::new();
    let mut violations = Vec::new();
    let mut equality: BTreeMap<(i64, &str, usize), u64> = BTreeMap::new();
    let mut exhausted: BTreeMap<(String, String), u64> = BTreeMap::new();
    for (chi, trials) in results {
        let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut fm1: BTreeMap<usize, u64> = BTreeMap::new();
        let mut rows: BTreeMap<&str, u64> = BTreeMap::new();
        let mut samples = 0;
        for (t, trial) in trials.into_iter().enumerate() {
            match trial {
                Trial::Done(o) => {
                    samples += 1;
                    *pairs.entry((o.h0, o.h1)).or_default() += 1;
                    *fm1.entry(o.h0_fm1).or_default() += 1;
                    *rows.entry(o.row).or_default() += 1;
                    if o.equality {
                        *equality.entry((chi, o.row, o.h0)).or_default() += 1;
                    }
                    if let (Some(claim), Some(morphism)) = (o.broken, o.morphism) {
                        violations.push(Violation {
                            chi,
                            row: o.row.to_string(),
                            trial: t as u64,
                            claim: claim.to_string(),
                            h0: o.h0,
                            h1: o.h1,
                            h0_fm1: o.h0_fm1,
                            morphism,
                        });
                    }
                }
                Trial::Exhausted { row, predicate } => *exhausted.entry((row, predicate)).or_default() += 1,
            }
        }
        per_chi.push(ChiSummary {
            chi,
            samples,
            pairs: pairs.into_iter().map(|((h0, h1), count)| PairCount { h0, h1, count }).collect(),
            h0_fm1: fm1.into_iter().map(|(value, count)| ValueCount { value, count }).collect(),
            rows: rows.into_iter().map(|(row, count)| RowCount { row: row.to_string(), count }).collect(),
        });
    }
    ScanReport {
        schema_version: SCHEMA_VERSION,
        scan: scan.to_string(),
        config: cfg.clone(),
        per_chi,
        violations,
        equality_cases: equality
            .into_iter()
            .map(|((chi, row, h0), count)| EqualityCase { chi, row: row.to_string(), h0, count })
            .collect(),
        exhausted: exhausted
            .into_iter()
            .map(|((row, predicate), count)| Exhaustion { row, predicate, count })
            .collect(),
        runtime_ms: None,
    }
}

fn scan_with(scan: &str, cfg: &ScanConfig, allowed: &[i64], check: Check) -> Result<ScanReport> {
    cfg.validate()?;
    if let Some(chi) = cfg.chi_list.iter().find(|c| !allowed.contains(c)) {
        return Err(PslError::InvalidConfig(format!("{scan} does not cover chi = {chi}")));
    }
    let results = with_field!(cfg.field, field => {
        cfg.chi_list
            .iter()
            .map(|&chi| run_chi(field, cfg, chi, check).map(|r| (chi, r)))
            .collect::<Result<Vec<_>>>()?
    });
    Ok(summarize(scan, cfg, results))
}

/// `h^0(F) <= 2 + chi/2` whenever `h^1(F) > 0`, for chi in {0, 1, 2, 3},
/// with equality only for O_C(1). Trial `t` draws from row `t mod k` of the
/// `k` rows for that chi.
pub fn clifford_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    scan_with("clifford-scan", cfg, &[0, 1, 2, 3], clifford_check)
}

/// `h^1 <= 1` on M(4,1), `h^1 = 0` on M(4,2) away from O_C(1),
/// `h^0(F(-1)) <= 1` on M(4,4). Other chi are sampled and tallied only.
pub fn vanishing_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    scan_with("vanishing-scan", cfg, &[0, 1, 2, 3, 4], vanishing_check)
}

type Outcome = (String, (usize, usize, usize), bool);

fn census_row<F: Field>(field: F, cfg: &ScanConfig, index: usize, row: &StratumDescriptor) -> Result<CensusRow> {
    // (row, triple, shape match) per trial; None when sampling gave up
    let outcomes: Vec<Result<Option<Outcome>>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, stream(16 + index as u64, t));
            let f: SheafPresentation<F> = match sample_stratum(row, field, &mut rng) {
                Ok(f) => f,
                Err(PslError::GenericityExhausted { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            match classify(&f) {
                Ok(c) => Ok(Some((c.row.id.to_string(), c.triple, c.shape_match))),
                Err(PslError::NoMatchingStratum { triple, .. }) => Ok(Some((String::new(), triple, false))),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut observed: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
    let (mut matches, mut shapes, mut none, mut exhausted) = (0, 0, 0, 0);
    for o in outcomes {
        match o? {
            None => exhausted += 1,
            Some((id, triple, shape)) => {
                *observed.entry(triple).or_default() += 1;
                if id.is_empty() {
                    none += 1;
                } else if id == row.id {
                    matches += 1;
                }
                if shape {
                    shapes += 1;
                }
            }
        }
    }
    Ok(CensusRow {
        id: row.id.to_string(),
        chi: row.chi,
        codim: row.codim,
        resolution: super::render::resolution_string(row),
        expected_triple: row.triple,
        samples: cfg.trials,
        matches,
        shape_matches: shapes,
        no_matching_stratum: none,
        exhausted,
        observed: observed.into_iter().map(|(triple, count)| TripleCount { triple, count }).collect(),
        passes: matches == cfg.trials,
    })
}

/// Samples every row whose chi is listed and classifies the samples.
pub fn census(cfg: &ScanConfig) -> Result<CensusReport> {
    cfg.validate()?;
    let rows = with_field!(cfg.field, field => {
        strata()
            .iter()
            .enumerate()
            .filter(|(_, r)| cfg.chi_list.contains(&r.chi))
            .map(|(i, r)| census_row(field, cfg, i, r))
            .collect::<Result<Vec<_>>>()?
    });
    let rows_passed = rows.iter().filter(|r| r.passes).count();
    Ok(CensusReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        rows_total: rows.len(),
        rows_passed,
        rows,
        runtime_ms: None,
    })
}

fn delta_trial<F: Field>(field: F, seed: u64, t: u64) -> Result<Option<DeltaFailure>> {
    let mut rng = trial_rng(seed, stream(32, t));
    let l: Vec<Form<F>> = (0..4).map(|_| Form::random(field, 1, &mut rng)).collect();
    let q: Vec<Form<F>> = (0..4).map(|_| Form::random(field, 2, &mut rng)).collect();
    let alpha = field.random(&mut rng);
    let w = w42([&l[0], &l[1]], alpha, [[&q[0], &q[1]], [&q[2], &q[3]]], [&l[2], &l[3]])?;
    let g = GroupElement42::random(field, &mut rng);
    let lhs = delta_map(&g.act(&w)?)?;
    let rhs = g.tau()?.apply(&delta_map(&w)?)?;
    Ok((lhs != rhs).then(|| DeltaFailure {
        trial: t,
        morphism: w.to_json(),
    }))
}

/// `Delta(g . w) = tau(g) . Delta(w)` on random pairs `(g, w)`.
pub fn delta_check(cfg: &ScanConfig) -> Result<DeltaReport> {
    cfg.validate()?;
    let failures = with_field!(cfg.field, field => {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| delta_trial(field, cfg.seed, t))
            .collect::<Result<Vec<_>>>()?
    });
    Ok(DeltaReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        trials: cfg.trials,
        failures: failures.into_iter().flatten().collect(),
        runtime_ms: None,
    })
}
