// SPDX-License-Identifier: Apache-2.0
//! Plain-text tables for the reports.

use std::fmt::Write;

use super::{CensusReport, DeltaReport, ScanReport};
use crate::atlas::StratumDescriptor;

/// `[-2, -2, -1]` as `2O(-2) + O(-1)`.
pub fn shape_string(twists: &[i32]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < twists.len() {
        let d = twists[i];
        let run = twists[i..].iter().take_while(|&&x| x == d).count();
        let mult = if run > 1 { run.to_string() } else { String::new() };
        let twist = if d == 0 { String::new() } else { format!("({d})") };
        parts.push(format!("{mult}O{twist}"));
        i += run;
    }
    parts.join(" + ")
}

pub(crate) fn resolution_string(row: &StratumDescriptor) -> String {
    format!("{} -> {}", shape_string(row.source), shape_string(row.target))
}

fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let rule: String = format!(
        "|{}|\n",
        widths.iter().map(|w| "-".repeat(w + 2)).collect::<Vec<_>>().join("|")
    );
    let mut out = line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    out.push_str(&rule);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

pub fn render_census_table(report: &CensusReport) -> String {
    let mut out = String::new();
    let mut chis: Vec<i64> = report.rows.iter().map(|r| r.chi).collect();
    chis.dedup();
    for chi in chis {
        let _ = writeln!(out, "M(4,{chi})");
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .filter(|r| r.chi == chi)
            .map(|r| {
                let (a, b, c) = r.expected_triple;
                let observed = r
                    .observed
                    .iter()
                    .map(|t| format!("{:?} x{}", t.triple, t.count))
                    .collect::<Vec<_>>()
                    .join(", ");
                vec![
                    r.id.clone(),
                    format!("h0(F(-1))={a} h1(F)={b} h0(F(x)Omega(1))={c}"),
                    r.resolution.clone(),
                    r.codim.to_string(),
                    format!("{}/{}", r.matches, r.samples),
                    observed,
                    if r.passes { "pass" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        out.push_str(&grid(
            &["stratum", "cohomological conditions", "resolution", "codim", "matched", "observed", "result"],
            &rows,
        ));
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "{}/{} rows pass (field {}, seed {}, {} samples per row)",
        report.rows_passed, report.rows_total, report.config.field, report.config.seed, report.config.trials
    );
    out
}

pub fn render_scan_table(report: &ScanReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} over {} (seed {}, {} samples per chi)",
        report.scan, report.config.field, report.config.seed, report.config.trials
    );
    let rows: Vec<Vec<String>> = report
        .per_chi
        .iter()
        .map(|c| {
            let pairs = c
                .pairs
                .iter()
                .map(|p| format!("({},{}) x{}", p.h0, p.h1, p.count))
                .collect::<Vec<_>>()
                .join(", ");
            let fm1 = c
                .h0_fm1
                .iter()
                .map(|v| format!("{} x{}", v.value, v.count))
                .collect::<Vec<_>>()
                .join(", ");
            vec![c.chi.to_string(), c.samples.to_string(), pairs, fm1]
        })
        .collect();
    out.push_str(&grid(&["chi", "samples", "(h0, h1)", "h0(F(-1))"], &rows));
    for e in &report.equality_cases {
        let _ = writeln!(out, "equality case: chi={} row {} h0={} x{}", e.chi, e.row, e.h0, e.count);
    }
    for e in &report.exhausted {
        let _ = writeln!(out, "exhausted: {} ({}) x{}", e.row, e.predicate, e.count);
    }
    let _ = writeln!(out, "{} violations", report.violations.len());
    for v in &report.violations {
        let _ = writeln!(
            out,
            "  trial {} chi={} row {}: {} broken (h0={}, h1={}, h0(F(-1))={})",
            v.trial, v.chi, v.row, v.claim, v.h0, v.h1, v.h0_fm1
        );
    }
    out
}

pub fn render_delta_table(report: &DeltaReport) -> String {
    let mut out = grid(
        &["field", "seed", "trials", "failures"],
        &[vec![
            report.config.field.to_string(),
            report.config.seed.to_string(),
            report.trials.to_string(),
            report.failures.len().to_string(),
        ]],
    );
    for f in &report.failures {
        let _ = writeln!(out, "  trial {} fails", f.trial);
    }
    out
}
