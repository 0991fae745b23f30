//! The three Mertens quantities over prime ideals and the field Mertens
//! constant.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Residue};
use crate::numeric::{NeumaierSum, EULER_GAMMA};
use crate::splitting::{for_each_prime, prime_ideals_up_to, PrimeIdealRecord};

/// Constant `c` in Chebyshev-type bounds `theta(x) < c x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaConstant {
    /// `1.01624`
    #[default]
    Classic,
    /// `1 + 1.93378e-8`
    Broadbent,
}

impl ThetaConstant {
    pub fn value(self) -> f64 {
        match self {
            ThetaConstant::Classic => 1.01624,
            ThetaConstant::Broadbent => 1.0 + 1.93378e-8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThetaConstant::Classic => "classic",
            ThetaConstant::Broadbent => "broadbent",
        }
    }
}

impl fmt::Display for ThetaConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ThetaConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(ThetaConstant::Classic),
            "broadbent" => Ok(ThetaConstant::Broadbent),
            other => Err(Error::Domain(format!(
                "theta constant must be `classic` or `broadbent`, got `{other}`"
            ))),
        }
    }
}

/// Default truncation point for the Mertens constant series.
pub const DEFAULT_TRUNCATION_X: f64 = 1e6;

/// `10^{k/4}` for `k` in `lo..=hi`.
pub fn quarter_decade_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi)
        .map(|k| {
            if k % 4 == 0 {
                10f64.powi(k / 4)
            } else {
                10f64.powf(k as f64 / 4.0)
            }
        })
        .collect()
}

/// Default x-grid `10^{k/4}`, `k = 4..=24`.
pub fn default_grid() -> Vec<f64> {
    quarter_decade_grid(4, 24)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MertensConstant {
    pub value: f64,
    pub tail_halfwidth: f64,
    pub truncation_x: f64,
    /// Set when the residue was not exact.
    pub approximate: bool,
}

impl MertensConstant {
    /// `value -/+ tail_halfwidth`.
    pub fn interval(&self) -> (f64, f64) {
        (self.value - self.tail_halfwidth, self.value + self.tail_halfwidth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MertensRow {
    pub x: f64,
    #[serde(rename = "sum_logN_over_N")]
    pub sum_log_norm_over_norm: f64,
    #[serde(rename = "A_K")]
    pub a_k: f64,
    pub sum_recip: f64,
    #[serde(rename = "B_K")]
    pub b_k: f64,
    pub product: f64,
    #[serde(rename = "C_K")]
    pub c_k: f64,
    #[serde(rename = "E_K_bound")]
    pub e_k_bound: f64,
    /// True when no prime ideal has norm `<= x` (the product is empty).
    pub empty_product: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MertensTable {
    pub constant: MertensConstant,
    pub rows: Vec<MertensRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThirdTheorem {
    pub product: f64,
    pub c_k: f64,
    pub e_k_bound: f64,
    /// `|C_K| <= E e^E` with `E` the bound on `|E_K|`.
    pub within_bound: bool,
}

fn require_x(x: f64) -> Result<()> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("x = {x} < 2")));
    }
    Ok(())
}

pub(crate) fn require_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty x-grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("x-grid must be strictly ascending".into()));
    }
    require_x(grid[0])
}

/// `sum_{N(P) <= x} log N(P) / N(P)` and `A_K(x)`.
pub fn mertens_first(field: &FieldDescriptor, x: f64) -> Result<(f64, f64)> {
    require_x(x)?;
    let sum: NeumaierSum = prime_ideals_up_to(field, x)?
        .iter()
        .map(|r| {
            let n = r.norm as f64;
            n.ln() / n
        })
        .collect();
    let s = sum.value();
    Ok((s, s - x.ln()))
}

/// The field Mertens constant from its prime-ideal series truncated at
/// `truncation_x`, with a rigorous half-width for the omitted tail.
pub fn mertens_constant(
    field: &FieldDescriptor,
    truncation_x: f64,
    kappa: &Residue,
) -> Result<MertensConstant> {
    if !(truncation_x >= 10.0) {
        return Err(Error::Domain(format!("truncation_x = {truncation_x} < 10")));
    }
    let ideals = prime_ideals_up_to(field, truncation_x)?;
    Ok(constant_from_ideals(&ideals, field.degree(), truncation_x, kappa))
}

fn series_term(norm: u64) -> f64 {
    let u = 1.0 / norm as f64;
    u + (-u).ln_1p()
}

fn constant_from_ideals(
    ideals: &[PrimeIdealRecord],
    n: u32,
    truncation_x: f64,
    kappa: &Residue,
) -> MertensConstant {
    let series: NeumaierSum = ideals
        .iter()
        .take_while(|r| r.norm as f64 <= truncation_x)
        .map(|r| series_term(r.norm))
        .collect();
    MertensConstant {
        value: EULER_GAMMA + kappa.value.ln() + series.value(),
        tail_halfwidth: n as f64 / (truncation_x.ceil() - 1.0),
        truncation_x,
        approximate: !kappa.is_exact(),
    }
}

/// `sum_{N(P) <= x} 1/N(P)` and `B_K(x)`.
pub fn mertens_second(
    field: &FieldDescriptor,
    x: f64,
    mconst: &MertensConstant,
) -> Result<(f64, f64)> {
    require_x(x)?;
    let sum: NeumaierSum = prime_ideals_up_to(field, x)?
        .iter()
        .map(|r| 1.0 / r.norm as f64)
        .collect();
    let s = sum.value();
    Ok((s, s - x.ln().ln() - mconst.value))
}

/// `prod_{N(P) <= x} (1 - 1/N(P))`, `C_K(x)` and the bound on `|E_K(x)|`.
pub fn mertens_third(
    field: &FieldDescriptor,
    x: f64,
    mconst: &MertensConstant,
    kappa: &Residue,
) -> Result<ThirdTheorem> {
    require_x(x)?;
    let ideals = prime_ideals_up_to(field, x)?;
    if ideals.is_empty() {
        return Err(Error::EmptyProduct { x });
    }
    let mut recip = NeumaierSum::new();
    let mut logs = NeumaierSum::new();
    for r in &ideals {
        let u = 1.0 / r.norm as f64;
        recip.add(u);
        logs.add((-u).ln_1p());
    }
    let b_k = recip.value() - x.ln().ln() - mconst.value;
    let (product, c_k, e_k_bound) = third_quantities(field.degree(), x, logs.value(), b_k, kappa);
    Ok(ThirdTheorem {
        product,
        c_k,
        e_k_bound,
        within_bound: product_error_holds(c_k, e_k_bound),
    })
}

fn third_quantities(n: u32, x: f64, log_product: f64, b_k: f64, kappa: &Residue) -> (f64, f64, f64) {
    let product = log_product.exp();
    let c_k = (kappa.value.ln() + x.ln().ln() + EULER_GAMMA + log_product).exp_m1();
    let e_k_bound = n as f64 / (x - 1.0) + b_k.abs();
    (product, c_k, e_k_bound)
}

/// `|C| <= E e^E`.
pub fn product_error_holds(c_k: f64, e_k_bound: f64) -> bool {
    c_k.abs() <= e_k_bound * e_k_bound.exp()
}

/// Single pass over the ideals up to `max(grid, truncation_x)`.
pub fn mertens_table(
    field: &FieldDescriptor,
    grid: &[f64],
    kappa: &Residue,
    truncation_x: f64,
) -> Result<MertensTable> {
    require_grid(grid)?;
    if !(truncation_x >= 10.0) {
        return Err(Error::Domain(format!("truncation_x = {truncation_x} < 10")));
    }
    let top = grid[grid.len() - 1].max(truncation_x);
    let ideals = prime_ideals_up_to(field, top)?;
    Ok(table_from_ideals(&ideals, field.degree(), grid, kappa, truncation_x))
}

pub(crate) fn table_from_ideals(
    ideals: &[PrimeIdealRecord],
    n: u32,
    grid: &[f64],
    kappa: &Residue,
    truncation_x: f64,
) -> MertensTable {
    struct Prefix {
        s1: f64,
        s2: f64,
        logs: f64,
        empty: bool,
    }
    let mut s1 = NeumaierSum::new();
    let mut s2 = NeumaierSum::new();
    let mut logs = NeumaierSum::new();
    let mut series = NeumaierSum::new();
    let mut prefixes = Vec::with_capacity(grid.len());
    let mut gi = 0;
    let mut seen = 0usize;
    for r in ideals {
        let norm = r.norm as f64;
        while gi < grid.len() && norm > grid[gi] {
            prefixes.push(Prefix { s1: s1.value(), s2: s2.value(), logs: logs.value(), empty: seen == 0 });
            gi += 1;
        }
        let u = 1.0 / norm;
        if gi < grid.len() {
            s1.add(norm.ln() * u);
            s2.add(u);
            logs.add((-u).ln_1p());
        }
        if norm <= truncation_x {
            series.add(series_term(r.norm));
        }
        seen += 1;
        if gi == grid.len() && norm > truncation_x {
            break;
        }
    }
    while gi < grid.len() {
        prefixes.push(Prefix { s1: s1.value(), s2: s2.value(), logs: logs.value(), empty: seen == 0 });
        gi += 1;
    }
    let constant = MertensConstant {
        value: EULER_GAMMA + kappa.value.ln() + series.value(),
        tail_halfwidth: n as f64 / (truncation_x.ceil() - 1.0),
        truncation_x,
        approximate: !kappa.is_exact(),
    };
    let rows = grid
        .iter()
        .zip(prefixes)
        .map(|(&x, pre)| {
            let b_k = pre.s2 - x.ln().ln() - constant.value;
            let (product, c_k, e_k_bound) = third_quantities(n, x, pre.logs, b_k, kappa);
            MertensRow {
                x,
                sum_log_norm_over_norm: pre.s1,
                a_k: pre.s1 - x.ln(),
                sum_recip: pre.s2,
                b_k,
                product,
                c_k,
                e_k_bound,
                empty_product: pre.empty,
            }
        })
        .collect();
    MertensTable { constant, rows }
}

/// `sum_{p <= x} log p / p^alpha` over rational primes.
pub fn prime_power_sum(x: f64, alpha: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    for_each_prime(x, |p| {
        let pf = p as f64;
        acc.add(pf.ln() * (-alpha * pf.ln()).exp());
    });
    acc.value()
}

/// `prime_power_sum` at every grid point for every exponent; result indexed
/// `[alpha][grid point]`.
pub fn prime_power_sums(grid: &[f64], alphas: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(grid.len()); alphas.len()];
    let mut acc = vec![NeumaierSum::new(); alphas.len()];
    let top = grid.iter().copied().fold(0.0, f64::max);
    let mut gi = 0;
    let flush = |gi: &mut usize, bound: f64, acc: &[NeumaierSum], out: &mut Vec<Vec<f64>>| {
        while *gi < grid.len() && bound > grid[*gi] {
            for (o, a) in out.iter_mut().zip(acc) {
                o.push(a.value());
            }
            *gi += 1;
        }
    };
    for_each_prime(top, |p| {
        let pf = p as f64;
        flush(&mut gi, pf, &acc, &mut out);
        let lp = pf.ln();
        for (a, &alpha) in acc.iter_mut().zip(alphas) {
            a.add(lp * (-alpha * lp).exp());
        }
    });
    flush(&mut gi, f64::INFINITY, &acc, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{kappa_exact, load_field, ResidueProvenance};
    use std::f64::consts::PI;

    fn gauss() -> FieldDescriptor {
        load_field("poly = [1, 0, 1]\nclass_number = 1\nregulator = \"1\"\nroots_of_unity = 4").unwrap()
    }

    #[test]
    fn first_theorem_examples() {
        let (s, a) = mertens_first(&gauss(), 5.0).unwrap();
        let want = 2f64.ln() / 2.0 + 2.0 * 5f64.ln() / 5.0;
        assert!((s - want).abs() < 1e-15);
        assert!((a - (want - 5f64.ln())).abs() < 1e-15);
        assert!((a + 0.6190).abs() < 1e-4);
        let (s, _) = mertens_first(&FieldDescriptor::rational(), 2.0).unwrap();
        assert!((s - 2f64.ln() / 2.0).abs() < 1e-15);
        let golden = load_field("poly = [-1, -1, 1]").unwrap();
        let (s, a) = mertens_first(&golden, 4.0).unwrap();
        assert!((s - 4f64.ln() / 4.0).abs() < 1e-15);
        assert!((a + 1.0397).abs() < 1e-4);
        assert!(mertens_first(&golden, 1.0).is_err());
    }

    #[test]
    fn second_and_third_examples() {
        let q = FieldDescriptor::rational();
        let one = kappa_exact(&q).unwrap();
        let m = mertens_constant(&q, 10.0, &one).unwrap();
        assert!((m.tail_halfwidth - 1.0 / 9.0).abs() < 1e-15);
        let (s, _) = mertens_second(&q, 10.0, &m).unwrap();
        assert!((s - (0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0)).abs() < 1e-15);
        let third = mertens_third(&q, 3.0, &m, &one).unwrap();
        assert!((third.product - 1.0 / 3.0).abs() < 1e-15);

        let k = gauss();
        let kap = kappa_exact(&k).unwrap();
        let m = mertens_constant(&k, 10.0, &kap).unwrap();
        assert!((m.tail_halfwidth - 2.0 / 9.0).abs() < 1e-15);
        let (s, _) = mertens_second(&k, 5.0, &m).unwrap();
        assert!((s - 0.9).abs() < 1e-15);
        let third = mertens_third(&k, 5.0, &m, &kap).unwrap();
        assert!((third.product - 0.32).abs() < 1e-15);
        assert!(third.within_bound);
    }

    #[test]
    fn empty_product_is_an_error() {
        let golden = load_field("poly = [-1, -1, 1]").unwrap();
        let kap = Residue::user_supplied(0.43).unwrap();
        let m = mertens_constant(&golden, 10.0, &kap).unwrap();
        assert!(m.approximate);
        assert_eq!(mertens_third(&golden, 3.0, &m, &kap), Err(Error::EmptyProduct { x: 3.0 }));
    }

    #[test]
    fn rational_mertens_constant() {
        let q = FieldDescriptor::rational();
        let m = mertens_constant(&q, 1e6, &kappa_exact(&q).unwrap()).unwrap();
        assert!(m.value > 0.2614 && m.value < 0.2616, "{}", m.value);
        assert!(m.tail_halfwidth <= 1.1e-6);
        assert!(!m.approximate);
    }

    #[test]
    fn gaussian_constant_in_interval() {
        let k = gauss();
        let kap = kappa_exact(&k).unwrap();
        let m = mertens_constant(&k, 1e5, &kap).unwrap();
        let hi = EULER_GAMMA + (PI / 4.0).ln();
        let (lo_m, hi_m) = m.interval();
        assert!(hi_m <= hi && lo_m >= hi - 2.0);
        assert!((hi - 0.3357).abs() < 1e-4);
    }

    #[test]
    fn table_matches_standalone_operations() {
        let k = gauss();
        let kap = kappa_exact(&k).unwrap();
        let grid = [2.0, 5.0, 10.0, 77.7, 1000.0];
        let table = mertens_table(&k, &grid, &kap, 1000.0).unwrap();
        let m = mertens_constant(&k, 1000.0, &kap).unwrap();
        assert_eq!(table.constant, m);
        for row in &table.rows {
            let (s1, a) = mertens_first(&k, row.x).unwrap();
            let (s2, b) = mertens_second(&k, row.x, &m).unwrap();
            let third = mertens_third(&k, row.x, &m, &kap).unwrap();
            assert!((row.sum_log_norm_over_norm - s1).abs() < 1e-13);
            assert!((row.a_k - a).abs() < 1e-13);
            assert!((row.sum_recip - s2).abs() < 1e-13);
            assert!((row.b_k - b).abs() < 1e-13);
            assert!((row.product - third.product).abs() < 1e-13);
            assert!((row.c_k - third.c_k).abs() < 1e-12);
            assert!(1.0 + row.c_k > 0.0);
        }
    }

    #[test]
    fn table_tolerates_empty_product() {
        let golden = load_field("poly = [-1, -1, 1]").unwrap();
        let kap = Residue::new(0.43, ResidueProvenance::UserSupplied).unwrap();
        let t = mertens_table(&golden, &[2.0, 3.0, 4.0], &kap, 10.0).unwrap();
        assert!(t.rows[0].empty_product && t.rows[1].empty_product);
        assert!(!t.rows[2].empty_product);
        assert_eq!(t.rows[0].product, 1.0);
        assert!(mertens_table(&golden, &[3.0, 2.0], &kap, 10.0).is_err());
    }

    #[test]
    fn prime_power_examples() {
        let want = 2f64.ln() / 4.0 + 3f64.ln() / 9.0 + 5f64.ln() / 25.0 + 7f64.ln() / 49.0;
        assert!((prime_power_sum(10.0, 2.0) - want).abs() < 1e-15);
        assert!((want - 0.39944479573312176).abs() < 1e-15);
        assert!((prime_power_sum(10.0, 0.0) - 210f64.ln()).abs() < 1e-14);
        assert!((prime_power_sum(2.0, 1.0) - 2f64.ln() / 2.0).abs() < 1e-15);
        let sums = prime_power_sums(&[10.0, 100.0], &[0.0, 2.0]);
        assert!((sums[1][0] - want).abs() < 1e-15);
        assert!((sums[0][1] - prime_power_sum(100.0, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn grids() {
        let g = default_grid();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 10.0);
        assert_eq!(g[20], 1e6);
        assert!((g[1] - 10f64.powf(1.25)).abs() < 1e-12);
        assert_eq!("broadbent".parse::<ThetaConstant>().unwrap(), ThetaConstant::Broadbent);
        assert!("other".parse::<ThetaConstant>().is_err());
    }
}
