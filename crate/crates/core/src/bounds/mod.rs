//! Explicit constants: Sunley's ideal-count envelope, the Mertens error
//! constants, residue bounds, and the prime-sum lemmas they rest on.

mod logmag;
mod verify;

pub use logmag::{LogMagnitude, RENDER_LN_LIMIT};
pub use verify::{
    sunley_envelope_checks, verify_all, BoundsReport, Check, CheckValue, VerifyOptions,
};

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Residue};
use crate::numeric::{factorial_f64, ln_factorial};

/// Label attached to every Stark-type bound.
pub const STARK_LABEL: &str = "conditionally-admissible (c8 = pi/6)";

const ZIMMERT_CONSTANT: f64 = 0.36232;

fn require_degree(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::Domain(format!("degree {n} < {min}")));
    }
    Ok(())
}

fn require_disc(abs_disc: f64) -> Result<()> {
    if !(abs_disc >= 3.0) {
        return Err(Error::Domain(format!("|disc| = {abs_disc} < 3")));
    }
    Ok(())
}

/// Sunley's constant `Lambda_K`.
pub fn lambda_k(n: u32, abs_disc: f64) -> Result<LogMagnitude> {
    require_degree(n, 2)?;
    require_disc(abs_disc)?;
    let nf = n as f64;
    let ln_d = abs_disc.ln();
    Ok(LogMagnitude::from_ln(
        28.2 * nf + 5.0 + 2.5 * (nf + 1.0) * (nf + 1.0).ln() + ln_d / (nf + 1.0) + nf * ln_d.ln(),
    ))
}

/// The constant `Upsilon_K` bounding the first Mertens error term.
pub fn upsilon_k(n: u32, abs_disc: f64, kappa: &Residue) -> Result<LogMagnitude> {
    let lam = lambda_k(n, abs_disc)?;
    let nf = n as f64;
    let k = kappa.value;
    let one = LogMagnitude::one();
    let first = lam.scale((nf + 1.0).powi(2) / (2.0 * k * (nf - 1.0))) + one;
    let second = lam.scale(0.55 * nf * (nf + 1.0) / k);
    let third = LogMagnitude::new(nf)?;
    let fourth = lam.scale(40.31 * nf / k);
    Ok(LogMagnitude::sum([first, second, third, fourth]).expect("four summands"))
}

/// Upper bound `Xi_K(x)` for the higher prime-power part of the
/// Legendre–Chebyshev expansion.
pub fn xi_k(n: u32, abs_disc: f64, kappa: f64, x: f64) -> Result<LogMagnitude> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("x = {x} < 2")));
    }
    let lam = lambda_k(n, abs_disc)?;
    let nf = n as f64;
    let lx = x.ln();
    let inner = match n {
        2 => 3.3 * x + 2.0 * x.cbrt() * lx + 50.8 * x.cbrt(),
        3 => 3.0 * x.sqrt() * lx + 96.0 * x.sqrt(),
        _ => 40.31 * nf * x.powf(1.0 - 2.0 / (nf + 1.0)),
    };
    Ok(LogMagnitude::new(kappa * nf * x)? + lam.scale(inner))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SunleyConstants {
    pub n: u32,
    pub a1: LogMagnitude,
    pub a3: LogMagnitude,
    pub a7: LogMagnitude,
    /// `(a7 + a3)(2n)^{2/(n+1)}`, which must not exceed `a1`.
    pub combined: LogMagnitude,
    pub inequality_holds: bool,
}

pub fn sunley_constants(n: u32) -> Result<SunleyConstants> {
    require_degree(n, 1)?;
    let nf = n as f64;
    let a1 = LogMagnitude::from_ln(28.2 * nf + 5.0 + 2.5 * (nf + 1.0) * (nf + 1.0).ln());
    let a3 = LogMagnitude::from_ln(
        2.0 * nf * 2f64.ln() + 0.5 + nf * PI.ln() + (nf + 1.0) * 1.3f64.ln(),
    );
    let a7 = LogMagnitude::from_ln(
        (4.0 * nf + 2.0) * 2f64.ln() + nf * 5f64.ln() + ln_factorial(n),
    );
    let combined = (a7 + a3) * LogMagnitude::from_ln(2.0 / (nf + 1.0) * (2.0 * nf).ln());
    Ok(SunleyConstants {
        n,
        a1,
        a3,
        a7,
        combined,
        inequality_holds: combined <= a1,
    })
}

/// Louboutin's upper bound for the residue.
pub fn louboutin_upper(n: u32, abs_disc: f64) -> Result<f64> {
    require_degree(n, 2)?;
    require_disc(abs_disc)?;
    let m = (n - 1) as f64;
    Ok((E * abs_disc.ln() / (2.0 * m)).powf(m))
}

/// Zimmert-type lower bound for the residue.
pub fn zimmert_lower(abs_disc: f64) -> Result<f64> {
    require_disc(abs_disc)?;
    Ok(ZIMMERT_CONSTANT / abs_disc.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarkCase {
    Normal,
    NormalTower,
    General,
}

/// Which denominator produced the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarkVariant {
    RootDiscriminant,
    LogDiscriminant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarkBound {
    pub value: f64,
    pub case: StarkCase,
    pub variant: StarkVariant,
    pub label: &'static str,
}

/// Stark-type lower bound for the residue; `None` for the rationals.
pub fn stark_lower(field: &FieldDescriptor) -> Result<Option<StarkBound>> {
    let n = field.degree();
    if n < 2 {
        return Ok(None);
    }
    let flags = field.flags();
    let case = match (flags.normal_over_q, flags.normal_tower) {
        (Some(true), _) => StarkCase::Normal,
        (Some(false), Some(true)) => StarkCase::NormalTower,
        (Some(false), Some(false)) => StarkCase::General,
        (None, _) => return Err(Error::UnknownStructureFlags("normal_over_q is unknown")),
        (Some(false), None) => {
            return Err(Error::UnknownStructureFlags(
                "normal_tower is unknown for a non-normal field",
            ))
        }
    };
    let nf = n as f64;
    let g = match case {
        StarkCase::Normal | StarkCase::NormalTower => 1.0,
        StarkCase::General => factorial_f64(n),
    };
    let abs_disc = field.abs_discriminant();
    require_disc(abs_disc)?;
    let (c_root, c_log) = match case {
        StarkCase::Normal => (0.015744605, 0.005792116),
        StarkCase::NormalTower => (0.003936151, 0.001448029),
        StarkCase::General => (0.015744605, 0.005792116),
    };
    let root = c_root / (nf * g * abs_disc.powf(1.0 / nf));
    let mut best = StarkBound {
        value: root,
        case,
        variant: StarkVariant::RootDiscriminant,
        label: STARK_LABEL,
    };
    if flags.quadratic_subfield == Some(false) {
        let via_log = c_log / (g * abs_disc.ln());
        if via_log > best.value {
            best.value = via_log;
            best.variant = StarkVariant::LogDiscriminant;
        }
    }
    Ok(Some(best))
}

/// Explicit upper bound for `sum_{p <= x} log p / p^alpha`.
pub fn prime_power_sum_bound(x: f64, alpha: f64) -> Result<f64> {
    if !(x >= 2.0) || !(alpha >= 0.0) {
        return Err(Error::Domain(format!("need x >= 2 and alpha >= 0, got x = {x}, alpha = {alpha}")));
    }
    Ok(if alpha < 1.0 {
        1.1 / (1.0 - alpha) * x.powf(1.0 - alpha)
    } else if alpha == 1.0 {
        x.ln()
    } else {
        1.1 * alpha / ((alpha - 1.0) * 2f64.powf(alpha - 1.0))
    })
}

/// The three regimes of the weighted prime-ideal sum bound, by the sign of
/// `alpha - 1` with `alpha = j (1 - 2/(n+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultipartCase {
    BelowOne,
    AtOne,
    AboveOne,
}

pub fn multipart_case(n: u32, j: u32) -> Result<MultipartCase> {
    if n < 2 || j < 1 {
        return Err(Error::Domain(format!("need n >= 2 and j >= 1, got n = {n}, j = {j}")));
    }
    Ok(match (j, n) {
        (1, _) | (2, 2) => MultipartCase::BelowOne,
        (2, 3) | (3, 2) => MultipartCase::AtOne,
        _ => MultipartCase::AboveOne,
    })
}

/// Bound for `x^{1-2/(n+1)} sum_{N(P) <= x} log N(P) / N(P)^{j(1-2/(n+1))}`.
pub fn multipart_bound(n: u32, j: u32, x: f64) -> Result<f64> {
    let case = multipart_case(n, j)?;
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("x = {x} < 2")));
    }
    let nf = n as f64;
    let beta = 1.0 - 2.0 / (nf + 1.0);
    Ok(match case {
        MultipartCase::BelowOne => 0.55 * nf * (nf + 1.0) * x,
        MultipartCase::AtOne => nf * x.powf(beta) * x.ln(),
        MultipartCase::AboveOne => 13.2 * nf * x.powf(beta) / 2f64.powf(j as f64 / 3.0),
    })
}
