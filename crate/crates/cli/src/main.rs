// SPDX-License-Identifier: Apache-2.0
//! `psl`: command-line front end for the sheaf computations.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use psl_core::atlas::{classify, vanishing_bounds};
use psl_core::cohomology::{h0_dim, h1, monad_check};
use psl_core::harness::{
    census, clifford_scan, delta_check, render_census_table, render_delta_table, render_scan_table, ScanConfig,
    EXIT_CLEAN, EXIT_EXHAUSTED, EXIT_VIOLATIONS, SCHEMA_VERSION,
};
use psl_core::stability::{
    g_semistable, gred_semistable, kronecker_semistable, stability_5c, GMode, KroneckerModule, Polarization,
};
use psl_core::subspace::DEFAULT_BUDGET;
use psl_core::{AnyMorphism, Field, FieldSpec, MorphismJson, PslError, SheafMorphism, SheafPresentation};

#[derive(Parser)]
#[command(name = "psl", version, about = "Exact computations with sheaves on the projective plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Exhaustive,
    Mc,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Input {
    /// Morphism JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Reinterpret the entries over this field instead of the document's.
    #[arg(long)]
    field: Option<FieldSpec>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value = "F7")]
    field: FieldSpec,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated Euler characteristics.
    #[arg(long, value_delimiter = ',')]
    chi: Option<Vec<i64>>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Stratum of the cokernel, after twisting chi into (0, 4].
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Beilinson tableau, monad and vanishing thresholds.
    Cohomology {
        #[command(flatten)]
        input: Input,
        /// Also report h^0 and h^1 of this twist.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i32,
        #[command(flatten)]
        output: Output,
    },
    /// Stability of the presenting morphism.
    Stability {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Weights `l1,..,mu1,..` as fractions, source groups first.
        #[arg(long)]
        polarization: Option<String>,
        /// Translates tried in Monte Carlo mode.
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        output: Output,
    },
    /// Equivariance of Delta on random pairs (g, w).
    DeltaCheck {
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        output: Output,
    },
    /// h^0 <= 2 + chi/2 when h^1 > 0.
    CliffordScan {
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Vanishing statements on M(4,1), M(4,2) and M(4,4).
    VanishingScan {
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Samples every stratum and classifies the samples.
    Census {
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        output: Output,
    },
}

macro_rules! on_morphism {
    ($m:expr, $phi:ident => $body:expr) => {
        match $m {
            AnyMorphism::Q($phi) => $body,
            AnyMorphism::Fp($phi) => $body,
        }
    };
}

fn load(input: &Input) -> anyhow::Result<AnyMorphism> {
    let text = fs::read_to_string(&input.input).with_context(|| format!("reading {}", input.input.display()))?;
    let mut doc = MorphismJson::parse_str(&text)?;
    if let Some(field) = input.field {
        doc.field = field;
    }
    Ok(AnyMorphism::from_json(&doc)?)
}

fn emit(output: &Output, report: &Value, table: impl FnOnce() -> String) -> anyhow::Result<()> {
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Table => table(),
    };
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn tagged(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(out), Value::Object(extra)) = (&mut v, body) {
        out.extend(extra);
    }
    v
}

fn key_values(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| format!("{k:<24} {}\n", x))
            .collect(),
        other => format!("{other}\n"),
    }
}

fn classify_cmd<F: Field>(phi: SheafMorphism<F>) -> anyhow::Result<(Value, i32)> {
    let f = SheafPresentation::new(phi)?;
    match classify(&f) {
        Ok(report) => Ok((
            tagged(
                "classify",
                json!({
                    "row": report.row.id,
                    "chi": report.chi,
                    "codim": report.row.codim,
                    "triple": report.triple,
                    "shape_match": report.shape_match,
                    "normalizing_twist": report.twist,
                }),
            ),
            EXIT_CLEAN,
        )),
        Err(PslError::NoMatchingStratum { chi, triple }) => Ok((
            tagged(
                "classify",
                json!({ "row": Value::Null, "chi": chi, "triple": triple, "no_matching_stratum": true }),
            ),
            EXIT_VIOLATIONS,
        )),
        Err(e) => Err(e.into()),
    }
}

fn cohomology_cmd<F: Field>(phi: SheafMorphism<F>, twist: i32) -> anyhow::Result<Value> {
    let f = SheafPresentation::new(phi)?;
    let monad = monad_check(&f)?;
    Ok(tagged(
        "cohomology",
        json!({
            "r": f.r(),
            "chi": f.chi(),
            "twist": twist,
            "h0": h0_dim(&f, twist),
            "h1": h1(&f, twist),
            "tableau": {
                "top": monad.table.top_row(),
                "bottom": monad.table.bottom_row(),
            },
            "monad": monad,
            "vanishing_bounds": vanishing_bounds(f.r(), f.chi()).to_json(),
        }),
    ))
}

fn stability_cmd<F: Field>(
    phi: SheafMorphism<F>,
    mode: Mode,
    polarization: Option<&str>,
    samples: usize,
    seed: u64,
    budget: u128,
) -> anyhow::Result<Value> {
    let is_42 = phi.source() == [-2, -2, -1] && phi.target() == [-1, 0, 0];
    let sigma = || -> anyhow::Result<Polarization> {
        match polarization {
            Some(s) => Ok(Polarization::parse(s, phi.source_groups().len())?),
            None if is_42 => Ok(Polarization::default_42()),
            None => bail!("--polarization is required for {:?} -> {:?}", phi.source(), phi.target()),
        }
    };
    let (method, verdict) = if phi.is_linear() && mode != Mode::Mc {
        ("kronecker", kronecker_semistable(&KroneckerModule::from_linear(&phi)?, budget)?)
    } else {
        match mode {
            Mode::Exact if phi.source() == [-2, -1] && phi.target() == [0, 1] => ("divisibility", stability_5c(&phi)?),
            Mode::Exact if is_42 => ("exact-list", g_semistable(&phi, &sigma()?, GMode::ExactList, budget)?),
            Mode::Exact => {
                return Err(PslError::ModeUnavailable(format!(
                    "no exact criterion for {:?} -> {:?}; use --mode exhaustive or mc",
                    phi.source(),
                    phi.target()
                ))
                .into())
            }
            Mode::Exhaustive => ("polarized", gred_semistable(&phi, &sigma()?, budget)?),
            Mode::Mc => (
                "monte-carlo",
                g_semistable(&phi, &sigma()?, GMode::MonteCarlo { samples, seed }, budget)?,
            ),
        }
    };
    Ok(tagged(
        "stability",
        json!({ "method": method, "verdict": verdict.to_json() }),
    ))
}

fn scan_config(args: &ScanArgs, trials: u64, chi: &[i64]) -> anyhow::Result<ScanConfig> {
    Ok(ScanConfig::new(
        args.field,
        args.trials.unwrap_or(trials),
        args.seed,
        args.chi.clone().unwrap_or_else(|| chi.to_vec()),
    )?)
}

fn millis(start: Instant, timing: bool) -> Option<u64> {
    timing.then(|| start.elapsed().as_millis() as u64)
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let start = Instant::now();
    match cli.command {
        Command::Classify { input, output } => {
            let (report, code) = on_morphism!(load(&input)?, phi => classify_cmd(phi)?);
            emit(&output, &report, || key_values(&report))?;
            Ok(code)
        }
        Command::Cohomology { input, twist, output } => {
            let report = on_morphism!(load(&input)?, phi => cohomology_cmd(phi, twist)?);
            emit(&output, &report, || key_values(&report))?;
            Ok(EXIT_CLEAN)
        }
        Command::Stability {
            input,
            mode,
            polarization,
            trials,
            seed,
            budget,
            output,
        } => {
            let report = on_morphism!(
                load(&input)?,
                phi => stability_cmd(phi, mode, polarization.as_deref(), trials, seed, budget)?
            );
            emit(&output, &report, || key_values(&report))?;
            Ok(EXIT_CLEAN)
        }
        Command::DeltaCheck { scan, output } => {
            let mut report = delta_check(&scan_config(&scan, 1000, &[])?)?;
            report.runtime_ms = millis(start, scan.timing);
            emit(&output, &serde_json::to_value(&report)?, || render_delta_table(&report))?;
            Ok(report.exit_code())
        }
        Command::CliffordScan { scan, output } => {
            let mut report = clifford_scan(&scan_config(&scan, 10_000, &[0, 1, 2, 3])?)?;
            report.runtime_ms = millis(start, scan.timing);
            emit(&output, &serde_json::to_value(&report)?, || render_scan_table(&report))?;
            Ok(report.exit_code())
        }
        Command::VanishingScan { scan, output } => {
            let mut report = psl_core::harness::vanishing_scan(&scan_config(&scan, 10_000, &[1, 2, 4])?)?;
            report.runtime_ms = millis(start, scan.timing);
            emit(&output, &serde_json::to_value(&report)?, || render_scan_table(&report))?;
            Ok(report.exit_code())
        }
        Command::Census { scan, output } => {
            let mut report = census(&scan_config(&scan, 500, &[1, 2, 3, 4])?)?;
            report.runtime_ms = millis(start, scan.timing);
            emit(&output, &serde_json::to_value(&report)?, || render_census_table(&report))?;
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let exhausted = matches!(
                e.downcast_ref::<PslError>(),
                Some(PslError::BudgetExceeded { .. } | PslError::GenericityExhausted { .. })
            );
            ExitCode::from(if exhausted { EXIT_EXHAUSTED as u8 } else { 1 })
        }
    }
}
