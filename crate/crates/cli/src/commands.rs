use std::path::Path;

use nfmertens::bounds::{
    lambda_k, louboutin_upper, stark_lower, sunley_constants, upsilon_k, verify_all, zimmert_lower,
    LogMagnitude, StarkBound, SunleyConstants, VerifyOptions,
};
use nfmertens::idealcount::{ideal_count_sieve, kappa_estimate, sunley_envelope, KappaEstimate};
use nfmertens::mertens::{mertens_table, product_error_holds, MertensConstant, MertensRow};
use nfmertens::numeric::format_sig;
use nfmertens::polyfield::DEFAULT_FACTOR_SEED;
use nfmertens::splitting::{prime_ideals_up_to, PrimeIdealRecord};
use nfmertens::{kappa_exact, load_field, Error, FieldDescriptor, Residue};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Command, CommonArgs, Format, RunConfig, SieveTable};
use crate::error::CliError;
use crate::report::{emit_csv, emit_json, CsvTable, Meta};

/// Number of failed inequality checks in a completed run.
pub type Failures = usize;

fn sig(v: f64) -> String {
    format_sig(v, 15)
}

struct LoadedField {
    field: FieldDescriptor,
    bytes: Vec<u8>,
}

fn load(args: &CommonArgs) -> Result<LoadedField, CliError> {
    let bytes = std::fs::read(&args.field).map_err(|e| CliError::io(&args.field, e))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Input(format!("{}: not UTF-8: {e}", args.field.display())))?;
    let field = load_field(text)?.with_factor_seed(args.seed.unwrap_or(DEFAULT_FACTOR_SEED));
    Ok(LoadedField { field, bytes })
}

/// The exact residue when class data is present, else the ideal-count
/// estimate at `x_max`.
fn best_residue(field: &FieldDescriptor, x_max: f64) -> Result<Residue, CliError> {
    if field.has_class_data() {
        return Ok(kappa_exact(field)?);
    }
    if x_max < 100.0 {
        return Err(CliError::Input(format!(
            "no class data and --xmax {x_max} < 100 is too small to estimate the residue"
        )));
    }
    Ok(kappa_estimate(field, x_max)?.residue)
}

fn emit<T: Serialize>(
    meta: &Meta,
    out: Option<&Path>,
    body: impl FnOnce() -> T,
    table: impl FnOnce() -> CsvTable,
) -> Result<(), CliError> {
    match meta.config.format {
        Format::Json => emit_json(meta, &body(), out),
        Format::Csv => emit_csv(meta, &table(), out),
    }
}

pub fn run(command: &Command) -> Result<Failures, CliError> {
    match command {
        Command::Sieve { common, table } => {
            let mut config = RunConfig::new("sieve", common)?;
            config.table = Some(*table);
            sieve(common, &config, *table)
        }
        Command::Mertens { common } => mertens(common, &RunConfig::new("mertens", common)?),
        Command::Constants { common } => constants(common, &RunConfig::new("constants", common)?),
        Command::Residue { common, exact } => {
            let mut config = RunConfig::new("residue", common)?;
            config.exact = Some(*exact);
            residue(common, &config, *exact)
        }
        Command::Verify { common } => verify(common, &RunConfig::new("verify", common)?),
    }
}

#[derive(Serialize)]
struct CountsBody {
    counts: Vec<Value>,
}

#[derive(Serialize)]
struct SummatoryRow {
    x: f64,
    ideal_count_sum: u64,
    kappa_x: f64,
    envelope: Option<LogMagnitude>,
}

#[derive(Serialize)]
struct SummatoryBody<'a> {
    rows: &'a [SummatoryRow],
}

#[derive(Serialize)]
struct PrimesBody<'a> {
    primes: &'a [PrimeIdealRecord],
}

fn sieve(args: &CommonArgs, config: &RunConfig, table: SieveTable) -> Result<Failures, CliError> {
    let loaded = load(args)?;
    let field = &loaded.field;
    let meta = Meta::new(&loaded.bytes, config);
    let out = args.out.as_deref();
    match table {
        SieveTable::Counts => {
            let counts = ideal_count_sieve(field, config.x_max.floor() as u64)?;
            let cell = |m: usize| match counts.count_u64(m) {
                Some(c) => c.to_string(),
                None => counts.count(m).to_string(),
            };
            emit(
                &meta,
                out,
                || CountsBody {
                    counts: (1..=counts.limit())
                        .map(|m| match counts.count_u64(m) {
                            Some(c) => Value::from(c),
                            None => Value::from(counts.count(m).to_string()),
                        })
                        .collect(),
                },
                || {
                    let mut t = CsvTable::new(&["n", "I_K(n)"]);
                    for m in 1..=counts.limit() {
                        t.push(vec![m.to_string(), cell(m)]);
                    }
                    t
                },
            )?;
        }
        SieveTable::Summatory => {
            let top = config.grid[config.grid.len() - 1];
            let prefix = ideal_count_sieve(field, top.floor() as u64)?.summatory_table()?;
            let rows: Vec<SummatoryRow> = config
                .grid
                .iter()
                .map(|&x| {
                    let sum = prefix.at(x);
                    SummatoryRow {
                        x,
                        ideal_count_sum: sum,
                        kappa_x: sum as f64 / x,
                        envelope: sunley_envelope(field, x),
                    }
                })
                .collect();
            let table = || {
                let mut t = CsvTable::new(&["x", "ideal_count_sum", "kappa_x", "envelope"]);
                for r in &rows {
                    t.push(vec![
                        sig(r.x),
                        r.ideal_count_sum.to_string(),
                        sig(r.kappa_x),
                        r.envelope.map(|e| e.render()).unwrap_or_default(),
                    ]);
                }
                t
            };
            emit(&meta, out, || SummatoryBody { rows: &rows }, table)?;
        }
        SieveTable::Primes => {
            let primes = prime_ideals_up_to(field, config.x_max)?;
            let table = || {
                let mut t = CsvTable::new(&["p", "f", "norm"]);
                for r in &primes {
                    t.push(vec![r.p.to_string(), r.f.to_string(), r.norm.to_string()]);
                }
                t
            };
            emit(&meta, out, || PrimesBody { primes: &primes }, table)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct MertensBody<'a> {
    kappa: Residue,
    mertens_constant: MertensConstant,
    #[serde(rename = "upsilon_K")]
    upsilon_k: Option<LogMagnitude>,
    failed_checks: &'a [String],
    rows: &'a [MertensRow],
}

fn mertens(args: &CommonArgs, config: &RunConfig) -> Result<Failures, CliError> {
    let loaded = load(args)?;
    let field = &loaded.field;
    let kappa = best_residue(field, config.x_max)?;
    let table = mertens_table(field, &config.grid, &kappa, config.truncation_x)?;
    let n = field.degree();
    let upsilon = if n >= 2 { Some(upsilon_k(n, field.abs_discriminant(), &kappa)?) } else { None };
    let tail = table.constant.tail_halfwidth;

    let mut failed = Vec::new();
    for row in &table.rows {
        if !product_error_holds(row.c_k, row.e_k_bound) {
            failed.push(format!("product_error at x = {}", sig(row.x)));
        }
        if let Some(ups) = upsilon {
            if row.a_k.abs().ln() > ups.ln() {
                failed.push(format!("log_sum_error at x = {}", sig(row.x)));
            }
            if (row.b_k.abs() + tail).ln() > ups.scale(2.0 / row.x.ln()).ln() {
                failed.push(format!("reciprocal_sum_error at x = {}", sig(row.x)));
            }
        }
    }
    for f in &failed {
        eprintln!("check failed: {f}");
    }
    let failures = failed.len();

    let meta = Meta::new(&loaded.bytes, config);
    let ups_cell = upsilon.map(|u| u.render()).unwrap_or_default();
    let csv_table = || {
        let mut t = CsvTable::new(&[
            "x",
            "sum_logN_over_N",
            "A_K",
            "sum_recip",
            "B_K",
            "product",
            "C_K",
            "E_K_bound",
            "upsilon_K",
        ]);
        for r in &table.rows {
            t.push(vec![
                sig(r.x),
                sig(r.sum_log_norm_over_norm),
                sig(r.a_k),
                sig(r.sum_recip),
                sig(r.b_k),
                sig(r.product),
                sig(r.c_k),
                sig(r.e_k_bound),
                ups_cell.clone(),
            ]);
        }
        t
    };
    emit(
        &meta,
        args.out.as_deref(),
        || MertensBody {
            kappa,
            mertens_constant: table.constant,
            upsilon_k: upsilon,
            failed_checks: &failed,
            rows: &table.rows,
        },
        csv_table,
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct StarkEntry {
    bound: Option<StarkBound>,
    /// Why the bound was not evaluated.
    unavailable: Option<String>,
}

#[derive(Serialize)]
struct ConstantsBody {
    degree: u32,
    abs_discriminant: f64,
    kappa: Option<Residue>,
    #[serde(rename = "lambda_K")]
    lambda_k: Option<LogMagnitude>,
    #[serde(rename = "upsilon_K")]
    upsilon_k: Option<LogMagnitude>,
    sunley: SunleyConstants,
    louboutin_upper: Option<f64>,
    zimmert_lower: Option<f64>,
    stark_lower: StarkEntry,
}

fn stark_entry(field: &FieldDescriptor) -> Result<StarkEntry, CliError> {
    match stark_lower(field) {
        Ok(Some(bound)) => Ok(StarkEntry { bound: Some(bound), unavailable: None }),
        Ok(None) => Ok(StarkEntry { bound: None, unavailable: Some("degree 1".into()) }),
        Err(e @ Error::UnknownStructureFlags(_)) => Ok(StarkEntry { bound: None, unavailable: Some(e.to_string()) }),
        Err(e) => Err(e.into()),
    }
}

fn constants(args: &CommonArgs, config: &RunConfig) -> Result<Failures, CliError> {
    let loaded = load(args)?;
    let field = &loaded.field;
    let n = field.degree();
    let abs_disc = field.abs_discriminant();
    let kappa = if field.has_class_data() { Some(kappa_exact(field)?) } else { None };
    let quadratic_or_higher = n >= 2;
    let lambda = if quadratic_or_higher { Some(lambda_k(n, abs_disc)?) } else { None };
    let upsilon = match (quadratic_or_higher, &kappa) {
        (true, Some(k)) => Some(upsilon_k(n, abs_disc, k)?),
        _ => None,
    };
    let sunley = sunley_constants(n)?;
    let body = ConstantsBody {
        degree: n,
        abs_discriminant: abs_disc,
        kappa,
        lambda_k: lambda,
        upsilon_k: upsilon,
        sunley,
        louboutin_upper: if quadratic_or_higher { Some(louboutin_upper(n, abs_disc)?) } else { None },
        zimmert_lower: if quadratic_or_higher { Some(zimmert_lower(abs_disc)?) } else { None },
        stark_lower: stark_entry(field)?,
    };
    let failures = usize::from(!sunley.inequality_holds);
    if failures > 0 {
        eprintln!("check failed: sunley_a_constants for n = {n}");
    }

    let meta = Meta::new(&loaded.bytes, config);
    emit(
        &meta,
        args.out.as_deref(),
        || &body,
        || {
            let mut t = CsvTable::new(&["name", "value", "note"]);
            let mut row = |name: &str, value: String, note: &str| {
                t.push(vec![name.to_string(), value, note.to_string()])
            };
            row("degree", n.to_string(), "");
            row("abs_discriminant", sig(abs_disc), "");
            if let Some(k) = &body.kappa {
                row("kappa", sig(k.value), "exact-class-number-formula");
            }
            if let Some(l) = &body.lambda_k {
                row("lambda_K", l.render(), "");
            }
            if let Some(u) = &body.upsilon_k {
                row("upsilon_K", u.render(), "");
            }
            row("a1", sunley.a1.render(), "");
            row("a3", sunley.a3.render(), "");
            row("a7", sunley.a7.render(), "");
            row(
                "a_combined",
                sunley.combined.render(),
                if sunley.inequality_holds { "<= a1" } else { "> a1" },
            );
            if let Some(v) = body.louboutin_upper {
                row("louboutin_upper", sig(v), "");
            }
            if let Some(v) = body.zimmert_lower {
                row("zimmert_lower", sig(v), "");
            }
            match (&body.stark_lower.bound, &body.stark_lower.unavailable) {
                (Some(s), _) => row("stark_lower", sig(s.value), s.label),
                (None, Some(why)) => row("stark_lower", String::new(), why),
                (None, None) => {}
            }
            t
        },
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct ResidueBody {
    exact: Option<Residue>,
    estimate: Option<KappaEstimate>,
    zimmert_lower: Option<f64>,
    louboutin_upper: Option<f64>,
    stark_lower: StarkEntry,
}

fn residue(args: &CommonArgs, config: &RunConfig, require_exact: bool) -> Result<Failures, CliError> {
    let loaded = load(args)?;
    let field = &loaded.field;
    let exact = if require_exact || field.has_class_data() { Some(kappa_exact(field)?) } else { None };
    let estimate = if require_exact {
        None
    } else if config.x_max >= 100.0 {
        Some(kappa_estimate(field, config.x_max)?)
    } else {
        return Err(CliError::Input(format!("--xmax {} < 100 is too small to estimate the residue", config.x_max)));
    };
    let n = field.degree();
    let abs_disc = field.abs_discriminant();
    let body = ResidueBody {
        exact,
        estimate,
        zimmert_lower: if n >= 2 { Some(zimmert_lower(abs_disc)?) } else { None },
        louboutin_upper: if n >= 2 { Some(louboutin_upper(n, abs_disc)?) } else { None },
        stark_lower: stark_entry(field)?,
    };
    let mut failures = 0;
    if let (Some(k), Some(s)) = (&body.exact, &body.stark_lower.bound) {
        if !(s.value < k.value) {
            eprintln!("check failed: residue_stark_lower ({} >= {})", s.value, k.value);
            failures += 1;
        }
    }

    let meta = Meta::new(&loaded.bytes, config);
    emit(
        &meta,
        args.out.as_deref(),
        || &body,
        || {
            let mut t = CsvTable::new(&["name", "value", "note"]);
            if let Some(k) = &body.exact {
                t.push(vec!["kappa".into(), sig(k.value), "exact-class-number-formula".into()]);
            }
            if let Some(e) = &body.estimate {
                t.push(vec!["kappa".into(), sig(e.residue.value), "estimated-from-ideal-count".into()]);
                if let Some(h) = e.half_width {
                    t.push(vec!["half_width".into(), h.render(), "".into()]);
                }
            }
            if let Some(v) = body.zimmert_lower {
                t.push(vec!["zimmert_lower".into(), sig(v), "".into()]);
            }
            if let Some(v) = body.louboutin_upper {
                t.push(vec!["louboutin_upper".into(), sig(v), "".into()]);
            }
            if let Some(s) = &body.stark_lower.bound {
                t.push(vec!["stark_lower".into(), sig(s.value), s.label.into()]);
            }
            t
        },
    )?;
    Ok(failures)
}

fn verify(args: &CommonArgs, config: &RunConfig) -> Result<Failures, CliError> {
    let loaded = load(args)?;
    let field = &loaded.field;
    let kappa = best_residue(field, config.x_max)?;
    let options = VerifyOptions {
        theta: config.theta_constant.into(),
        truncation_x: config.truncation_x,
        ..VerifyOptions::default()
    };
    let report = verify_all(field, &config.grid, &kappa, &options)?;
    let failures = report.failures().count();
    for c in report.failures() {
        let at = c.x.map(|x| format!(" at x = {}", sig(x))).unwrap_or_default();
        eprintln!("check failed: {}{at}", c.name);
    }

    let meta = Meta::new(&loaded.bytes, config);
    emit(
        &meta,
        args.out.as_deref(),
        || &report,
        || {
            let mut t = CsvTable::new(&["check", "x", "quantity", "bound", "log_slack", "pass"]);
            for c in &report.checks {
                t.push(vec![
                    c.name.clone(),
                    c.x.map(sig).unwrap_or_default(),
                    sig(c.quantity),
                    c.bound.render(),
                    sig(c.log_slack),
                    c.pass.to_string(),
                ]);
            }
            t
        },
    )?;
    Ok(failures)
}
