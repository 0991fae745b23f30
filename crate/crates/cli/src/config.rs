use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nfmertens::idealcount::DENSE_SIEVE_LIMIT;
use nfmertens::mertens::{default_grid, quarter_decade_grid, ThetaConstant, DEFAULT_TRUNCATION_X};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "nfmertens", version, about = "Mertens sums, ideal counts and residue bounds for number fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ideal counts I_K(n), their partial sums, or the prime ideals.
    Sieve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = SieveTable::Counts)]
        table: SieveTable,
    },
    /// The three Mertens quantities and their error terms on the grid.
    Mertens {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Explicit constants and residue bounds.
    Constants {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The residue of the Dedekind zeta function at s = 1.
    Residue {
        #[command(flatten)]
        common: CommonArgs,
        /// Require the class number formula; fail if class data is missing.
        #[arg(long)]
        exact: bool,
    },
    /// Every explicit inequality on the grid.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Field descriptor file.
    #[arg(long)]
    pub field: PathBuf,
    /// Upper limit for sieving and for the grid.
    #[arg(long, default_value_t = 1e6)]
    pub xmax: f64,
    /// Comma-separated x values, or `quarter:LO:HI` for 10^{k/4}, k = LO..=HI.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ThetaArg::Classic)]
    pub theta_constant: ThetaArg,
    /// Cutoff of the Mertens constant series.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_X)]
    pub truncation_x: f64,
    /// Seed for randomized polynomial factorization.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaArg {
    Classic,
    Broadbent,
}

impl From<ThetaArg> for ThetaConstant {
    fn from(t: ThetaArg) -> Self {
        match t {
            ThetaArg::Classic => ThetaConstant::Classic,
            ThetaArg::Broadbent => ThetaConstant::Broadbent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SieveTable {
    Counts,
    Summatory,
    Primes,
}

/// Validated settings, echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub field: String,
    pub x_max: f64,
    pub grid: Vec<f64>,
    pub format: Format,
    pub theta_constant: ThetaArg,
    pub truncation_x: f64,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<SieveTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

impl RunConfig {
    pub fn new(command: &'static str, args: &CommonArgs) -> Result<Self, CliError> {
        let x_max = args.xmax;
        if !(x_max >= 2.0 && x_max <= DENSE_SIEVE_LIMIT) {
            return Err(CliError::Input(format!(
                "--xmax must lie in [2, {DENSE_SIEVE_LIMIT:e}], got {x_max}"
            )));
        }
        if !(args.truncation_x >= 10.0 && args.truncation_x <= DENSE_SIEVE_LIMIT) {
            return Err(CliError::Input(format!(
                "--truncation-x must lie in [10, {DENSE_SIEVE_LIMIT:e}], got {}",
                args.truncation_x
            )));
        }
        let grid = match &args.grid {
            Some(spec) => parse_grid(spec)?,
            None => default_grid().into_iter().filter(|&x| x <= x_max).collect(),
        };
        validate_grid(&grid, x_max)?;
        Ok(RunConfig {
            command,
            field: args.field.display().to_string(),
            x_max,
            grid,
            format: args.format,
            theta_constant: args.theta_constant,
            truncation_x: args.truncation_x,
            seed: args.seed,
            table: None,
            exact: None,
        })
    }
}

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |detail: String| CliError::Input(format!("bad --grid `{spec}`: {detail}"));
    if let Some(range) = spec.strip_prefix("quarter:") {
        let (lo, hi) = range
            .split_once(':')
            .ok_or_else(|| bad("expected quarter:LO:HI".into()))?;
        let lo: i32 = lo.trim().parse().map_err(|e| bad(format!("{e}")))?;
        let hi: i32 = hi.trim().parse().map_err(|e| bad(format!("{e}")))?;
        if lo > hi {
            return Err(bad("LO > HI".into()));
        }
        return Ok(quarter_decade_grid(lo, hi));
    }
    spec.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| bad(format!("`{t}`: {e}"))))
        .collect()
}

fn validate_grid(grid: &[f64], x_max: f64) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Input(format!("grid is empty below --xmax {x_max}")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CliError::Input("grid must be strictly ascending".into()));
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if !(lo >= 2.0) || hi > x_max {
        return Err(CliError::Input(format!(
            "grid must lie within [2, {x_max}], got [{lo}, {hi}]"
        )));
    }
    Ok(())
}
