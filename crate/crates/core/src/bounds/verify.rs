use serde::{Serialize, Serializer};

use super::{
    lambda_k, louboutin_upper, multipart_bound, prime_power_sum_bound, stark_lower,
    sunley_constants, upsilon_k, xi_k, zimmert_lower, LogMagnitude, StarkBound, SunleyConstants,
};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Residue};
use crate::idealcount::{sieve_from_splitting, sunley_envelope, IdealCounts, SummatoryTable, DENSE_SIEVE_LIMIT};
use crate::mertens::{
    prime_power_sums, require_grid, table_from_ideals, MertensConstant,
    MertensRow, ThetaConstant, DEFAULT_TRUNCATION_X,
};
use crate::numeric::{format_sig, NeumaierSum};
use crate::splitting::{ideals_from_splitting, splitting_types_up_to, PrimeIdealRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub theta: ThetaConstant,
    pub truncation_x: f64,
    /// Relative tolerance for the Legendre–Chebyshev identity.
    pub identity_tolerance: f64,
    pub painful_alphas: Vec<f64>,
    pub multipart_js: Vec<u32>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            theta: ThetaConstant::Classic,
            truncation_x: DEFAULT_TRUNCATION_X,
            identity_tolerance: 1e-9,
            painful_alphas: vec![0.0, 0.25, 0.5, 0.75, 1.0, 1.2, 1.5, 2.0, 3.0],
            multipart_js: vec![1, 2, 3, 4],
        }
    }
}

/// A bound as a plain double or in log domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CheckValue {
    Plain(f64),
    Log(LogMagnitude),
}

impl CheckValue {
    fn ln(&self) -> f64 {
        match self {
            CheckValue::Plain(v) if *v > 0.0 => v.ln(),
            CheckValue::Plain(v) if *v == 0.0 => f64::NEG_INFINITY,
            CheckValue::Plain(_) => f64::NAN,
            CheckValue::Log(l) => l.ln(),
        }
    }

    fn is_negative(&self) -> bool {
        matches!(self, CheckValue::Plain(v) if *v < 0.0)
    }

    pub fn render(&self) -> String {
        match self {
            CheckValue::Plain(v) => format_sig(*v, 15),
            CheckValue::Log(l) => l.render(),
        }
    }
}

/// One inequality at one cutoff. `log_slack > 0` means it holds with room.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub x: Option<f64>,
    pub quantity: f64,
    pub bound: CheckValue,
    #[serde(serialize_with = "finite_or_text")]
    pub log_slack: f64,
    pub pass: bool,
}

fn finite_or_text<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&format_sig(*v, 15))
    }
}

impl Check {
    /// `quantity <= bound` (or `<` when strict), with `quantity >= 0`.
    fn upper(name: impl Into<String>, x: Option<f64>, quantity: f64, bound: CheckValue, strict: bool) -> Check {
        let bl = bound.ln();
        let log_slack = if bound.is_negative() {
            f64::NEG_INFINITY
        } else if quantity == 0.0 && bl == f64::NEG_INFINITY {
            0.0
        } else {
            bl - quantity.ln()
        };
        let pass = log_slack > 0.0 || (!strict && log_slack == 0.0);
        Check { name: name.into(), x, quantity, bound, log_slack, pass }
    }

    /// `quantity > bound` (or `>=` when not strict), both positive.
    fn lower(name: impl Into<String>, x: Option<f64>, quantity: f64, bound: CheckValue, strict: bool) -> Check {
        let log_slack = if quantity <= 0.0 { f64::NEG_INFINITY } else { quantity.ln() - bound.ln() };
        let pass = log_slack > 0.0 || (!strict && log_slack == 0.0);
        Check { name: name.into(), x, quantity, bound, log_slack, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub degree: u32,
    pub abs_discriminant: f64,
    pub kappa: Residue,
    pub lambda_k: Option<LogMagnitude>,
    pub upsilon_k: Option<LogMagnitude>,
    pub louboutin_upper: Option<f64>,
    pub zimmert_lower: Option<f64>,
    pub stark_lower: Option<StarkBound>,
    pub sunley: SunleyConstants,
    pub theta_constant: ThetaConstant,
    pub mertens_constant: MertensConstant,
    pub mertens_rows: Vec<MertensRow>,
    /// Failures first, otherwise in evaluation order.
    pub checks: Vec<Check>,
}

impl BoundsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn checks_named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }
}

/// Prefix sums of `weights(N(P))` over ideals, at every grid point.
fn ideal_prefix_sums(
    ideals: &[PrimeIdealRecord],
    grid: &[f64],
    weights: &[&dyn Fn(f64) -> f64],
) -> Vec<Vec<f64>> {
    let mut acc = vec![NeumaierSum::new(); weights.len()];
    let mut out = vec![Vec::with_capacity(grid.len()); weights.len()];
    let mut gi = 0;
    for r in ideals {
        let norm = r.norm as f64;
        while gi < grid.len() && norm > grid[gi] {
            for (o, a) in out.iter_mut().zip(&acc) {
                o.push(a.value());
            }
            gi += 1;
        }
        if gi == grid.len() {
            break;
        }
        for (a, w) in acc.iter_mut().zip(weights) {
            a.add(w(norm));
        }
    }
    while gi < grid.len() {
        for (o, a) in out.iter_mut().zip(&acc) {
            o.push(a.value());
        }
        gi += 1;
    }
    out
}

/// `T_K` at every grid point.
fn log_weighted_sums(counts: &IdealCounts, grid: &[f64]) -> Vec<f64> {
    let mut acc = NeumaierSum::new();
    let mut out = Vec::with_capacity(grid.len());
    let mut gi = 0;
    for m in 1..=counts.limit() {
        while gi < grid.len() && (m as f64) > grid[gi] {
            out.push(acc.value());
            gi += 1;
        }
        let c = counts.count_u64(m).map(|c| c as f64).unwrap_or(f64::INFINITY);
        if c != 0.0 && m > 1 {
            acc.add(c * (m as f64).ln());
        }
    }
    while gi < grid.len() {
        out.push(acc.value());
        gi += 1;
    }
    out
}

/// Splits `sum_{N(P) <= x} log N(P) sum_{j >= 1} IdealSum(x / N(P)^j)` into
/// its `j = 1` part and its `j >= 2` part.
fn legendre_chebyshev_parts(ideals: &[PrimeIdealRecord], table: &SummatoryTable, x: f64) -> (f64, f64) {
    let mut first = NeumaierSum::new();
    let mut higher = NeumaierSum::new();
    for r in ideals {
        let norm = r.norm as f64;
        if norm > x {
            break;
        }
        let ln = norm.ln();
        first.add(ln * table.at(x / norm) as f64);
        let mut power = norm * norm;
        while power <= x {
            higher.add(ln * table.at(x / power) as f64);
            power *= norm;
        }
    }
    (first.value(), higher.value())
}

fn alpha_label(alpha: f64) -> String {
    format_sig(alpha, 6)
}

/// Evaluates every explicit inequality on the grid and collects the
/// constants they use.
pub fn verify_all(
    field: &FieldDescriptor,
    grid: &[f64],
    kappa: &Residue,
    options: &VerifyOptions,
) -> Result<BoundsReport> {
    require_grid(grid)?;
    let top = grid[grid.len() - 1];
    if top > DENSE_SIEVE_LIMIT {
        return Err(Error::SieveLimit { x: top, limit: DENSE_SIEVE_LIMIT });
    }
    if !(options.truncation_x >= 10.0) {
        return Err(Error::Domain(format!("truncation_x = {} < 10", options.truncation_x)));
    }
    let n = field.degree();
    let nf = n as f64;
    let abs_disc = field.abs_discriminant();
    let kv = kappa.value;
    let exact = kappa.is_exact();
    // sum the constant at least to the grid top
    let truncation = options.truncation_x.max(top);

    let split = splitting_types_up_to(field, truncation)?;
    let ideals = ideals_from_splitting(&split, truncation);
    let top_floor = top.floor() as usize;
    let split_to_top: Vec<_> = split.iter().filter(|s| s.p as usize <= top_floor).cloned().collect();
    let counts = sieve_from_splitting(&split_to_top, top_floor);
    let summatory = counts.summatory_table()?;
    let table = table_from_ideals(&ideals, n, grid, kappa, truncation);
    let mconst = table.constant;

    let lambda = if n >= 2 { Some(lambda_k(n, abs_disc)?) } else { None };
    let upsilon = if n >= 2 { Some(upsilon_k(n, abs_disc, kappa)?) } else { None };
    let sunley = sunley_constants(n)?;
    let (louboutin, zimmert, stark) = if n >= 2 {
        let stark = match stark_lower(field) {
            Ok(s) => s,
            Err(Error::UnknownStructureFlags(_)) => None,
            Err(e) => return Err(e),
        };
        (Some(louboutin_upper(n, abs_disc)?), Some(zimmert_lower(abs_disc)?), stark)
    } else {
        (None, None, None)
    };

    let mut alphas = vec![0.0];
    alphas.extend(&options.painful_alphas);
    let rational_sums = prime_power_sums(grid, &alphas);
    let theta_q = &rational_sums[0];

    let beta = 1.0 - 2.0 / (nf + 1.0);
    let theta_w = |norm: f64| norm.ln();
    let multipart_w: Vec<Box<dyn Fn(f64) -> f64>> = options
        .multipart_js
        .iter()
        .map(|&j| {
            let e = j as f64 * beta;
            Box::new(move |norm: f64| norm.ln() * (-e * norm.ln()).exp()) as Box<dyn Fn(f64) -> f64>
        })
        .collect();
    let mut weights: Vec<&dyn Fn(f64) -> f64> = vec![&theta_w];
    weights.extend(multipart_w.iter().map(|b| b.as_ref()));
    let ideal_sums = ideal_prefix_sums(&ideals, grid, &weights);
    let theta_field = &ideal_sums[0];
    let t_values = log_weighted_sums(&counts, grid);

    let mut checks = Vec::new();
    let theta_c = options.theta.value();
    for (gi, (&x, row)) in grid.iter().zip(&table.rows).enumerate() {
        let at = Some(x);
        checks.push(Check::upper("theta_rational", at, theta_q[gi], CheckValue::Plain(theta_c * x), true));
        checks.push(Check::upper("theta_field", at, theta_field[gi], CheckValue::Plain(nf * theta_q[gi]), false));
        for (ai, &alpha) in options.painful_alphas.iter().enumerate() {
            let bound = prime_power_sum_bound(x, alpha)?;
            checks.push(Check::upper(
                format!("lemma_painful_alpha{}", alpha_label(alpha)),
                at,
                rational_sums[ai + 1][gi],
                CheckValue::Plain(bound),
                true,
            ));
        }

        let t = t_values[gi];
        let (first, higher) = legendre_chebyshev_parts(&ideals, &summatory, x);
        checks.push(Check::upper(
            "legendre_chebyshev_identity",
            at,
            (t - (first + higher)).abs(),
            CheckValue::Plain(options.identity_tolerance * t.abs()),
            false,
        ));

        let e = row.e_k_bound;
        checks.push(Check::upper("product_error", at, row.c_k.abs(), CheckValue::Plain(e * e.exp()), false));

        let (Some(lam), Some(ups)) = (lambda, upsilon) else {
            continue;
        };
        checks.push(Check::upper("log_sum_error", at, row.a_k.abs(), CheckValue::Log(ups), false));
        checks.push(Check::upper(
            "reciprocal_sum_error",
            at,
            row.b_k.abs() + mconst.tail_halfwidth,
            CheckValue::Log(ups.scale(2.0 / x.ln())),
            false,
        ));
        for (ji, &j) in options.multipart_js.iter().enumerate() {
            let lhs = x.powf(beta) * ideal_sums[1 + ji][gi];
            checks.push(Check::upper(
                format!("multipart_j{j}"),
                at,
                lhs,
                CheckValue::Plain(multipart_bound(n, j, x)?),
                true,
            ));
        }
        if !exact {
            continue;
        }
        let ideal_sum = summatory.at(x) as f64;
        let envelope = sunley_envelope(field, x).expect("defined for n >= 2");
        checks.push(Check::upper("sunley_envelope", at, (ideal_sum - kv * x).abs(), CheckValue::Log(envelope), false));

        let weber = lam.scale((nf + 1.0).powi(2) / (2.0 * (nf - 1.0))) + LogMagnitude::new(kv)?;
        checks.push(Check::upper(
            "log_weighted_count",
            at,
            (t - kv * x * x.ln()).abs(),
            CheckValue::Log(weber.scale(x)),
            false,
        ));
        let s1 = row.sum_log_norm_over_norm;
        let linear = lam.scale(0.55 * nf * (nf + 1.0) * x);
        checks.push(Check::upper("first_power_sum", at, (first - kv * x * s1).abs(), CheckValue::Log(linear), false));
        let xi = xi_k(n, abs_disc, kv, x)?;
        checks.push(Check::upper("higher_power_sum", at, higher, CheckValue::Log(xi), false));
        checks.push(Check::upper(
            "log_weighted_count_via_primes",
            at,
            (t - kv * x * s1).abs(),
            CheckValue::Log(linear + xi),
            false,
        ));
    }

    if exact {
        let hi = crate::numeric::EULER_GAMMA + kv.ln();
        checks.push(Check::upper(
            "mertens_constant_upper",
            None,
            mconst.tail_halfwidth,
            CheckValue::Plain(hi - mconst.value),
            false,
        ));
        checks.push(Check::upper(
            "mertens_constant_lower",
            None,
            mconst.tail_halfwidth,
            CheckValue::Plain(mconst.value - (hi - nf)),
            false,
        ));
        if let (Some(z), Some(l)) = (zimmert, louboutin) {
            checks.push(Check::lower("residue_zimmert_lower", None, kv, CheckValue::Plain(z), true));
            checks.push(Check::upper("residue_louboutin_upper", None, kv, CheckValue::Plain(l), false));
        }
        if let Some(s) = stark {
            checks.push(Check::lower("residue_stark_lower", None, kv, CheckValue::Plain(s.value), true));
        }
    }
    checks.push(Check::upper(
        "sunley_a_constants",
        None,
        sunley.combined.value(),
        CheckValue::Log(sunley.a1),
        false,
    ));

    checks.sort_by_key(|c| c.pass);
    Ok(BoundsReport {
        degree: n,
        abs_discriminant: abs_disc,
        kappa: *kappa,
        lambda_k: lambda,
        upsilon_k: upsilon,
        louboutin_upper: louboutin,
        zimmert_lower: zimmert,
        stark_lower: stark,
        sunley,
        theta_constant: options.theta,
        mertens_constant: mconst,
        mertens_rows: table.rows,
        checks,
    })
}

/// Sunley's envelope `|IdealSum(x) - kappa x| <= Lambda_K x^{1 - 2/(n+1)}` at
/// arbitrary `x > 0`.
pub fn sunley_envelope_checks(field: &FieldDescriptor, kappa: &Residue, xs: &[f64]) -> Result<Vec<Check>> {
    if field.degree() < 2 {
        return Err(Error::Domain("Sunley's envelope needs degree >= 2".into()));
    }
    if let Some(bad) = xs.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::Domain(format!("envelope needs x > 0, got {bad}")));
    }
    let top = xs.iter().copied().fold(1.0, f64::max);
    if top > DENSE_SIEVE_LIMIT {
        return Err(Error::SieveLimit { x: top, limit: DENSE_SIEVE_LIMIT });
    }
    let split = splitting_types_up_to(field, top)?;
    let counts = sieve_from_splitting(&split, top.floor() as usize);
    let table = counts.summatory_table()?;
    Ok(xs
        .iter()
        .map(|&x| {
            let env = sunley_envelope(field, x).expect("x > 0, degree >= 2");
            let q = (table.at(x) as f64 - kappa.value * x).abs();
            Check::upper("sunley_envelope", Some(x), q, CheckValue::Log(env), false)
        })
        .collect())
}
