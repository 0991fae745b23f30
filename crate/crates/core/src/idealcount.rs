//! Ideal counting: `I_K(n)`, its summatory function, and the log-weighted
//! sum `T_K(x) = sum_{n <= x} I_K(n) log n`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::bounds::{lambda_k, LogMagnitude};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Residue, ResidueProvenance};
use crate::numeric::NeumaierSum;
use crate::splitting::{splitting_types_up_to, SplittingType};

/// Largest `x` accepted by the dense sieve.
pub const DENSE_SIEVE_LIMIT: f64 = 1e8;

/// `c_k = I_K(p^k)` for `k = 0..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCountTable {
    pub p: u64,
    pub counts: Vec<BigUint>,
}

/// Coefficients of `prod_i (1 - t^{f_i})^{-1}` up to `t^m`.
pub fn local_counts(split: &SplittingType, m: usize) -> LocalCountTable {
    let mut counts = vec![BigUint::zero(); m + 1];
    counts[0] = BigUint::one();
    for f in split.inertia_degrees() {
        let f = f as usize;
        for k in f..=m {
            let prev = counts[k - f].clone();
            counts[k] += prev;
        }
    }
    LocalCountTable { p: split.p, counts }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Row {
    Compact(Vec<u32>),
    Wide(Vec<BigUint>),
}

/// `I_K(n)` for `1 <= n <= x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealCounts {
    // slot 0 is unused and holds zero
    row: Row,
}

impl IdealCounts {
    /// The sieve limit `x`.
    pub fn limit(&self) -> usize {
        match &self.row {
            Row::Compact(v) => v.len() - 1,
            Row::Wide(v) => v.len() - 1,
        }
    }

    /// Whether every count fit in 32 bits.
    pub fn is_compact(&self) -> bool {
        matches!(self.row, Row::Compact(_))
    }

    pub fn count(&self, n: usize) -> BigUint {
        match &self.row {
            Row::Compact(v) => BigUint::from(v[n]),
            Row::Wide(v) => v[n].clone(),
        }
    }

    pub fn count_u64(&self, n: usize) -> Option<u64> {
        match &self.row {
            Row::Compact(v) => Some(v[n] as u64),
            Row::Wide(v) => v[n].to_u64(),
        }
    }

    /// `I_K(1), ..., I_K(x)`.
    pub fn to_vec(&self) -> Vec<BigUint> {
        (1..=self.limit()).map(|n| self.count(n)).collect()
    }

    /// Prefix sums `IdealSum(k) = sum_{n <= k} I_K(n)`.
    pub fn summatory_table(&self) -> Result<SummatoryTable> {
        let mut prefix = Vec::with_capacity(self.limit() + 1);
        let mut acc: u64 = 0;
        prefix.push(0);
        for n in 1..=self.limit() {
            let c = self.count_u64(n).ok_or_else(|| {
                Error::invariant("ideal counts fit in 64 bits", format!("I_K({n}) too large"))
            })?;
            acc = acc.checked_add(c).ok_or_else(|| {
                Error::invariant("ideal count sums fit in 64 bits", format!("overflow at n = {n}"))
            })?;
            prefix.push(acc);
        }
        Ok(SummatoryTable { prefix })
    }

    /// `sum_{n <= x} I_K(n) log n`, compensated.
    pub fn log_weighted_sum(&self, x: f64) -> f64 {
        let top = clamp_floor(x, self.limit());
        let mut acc = NeumaierSum::new();
        for n in 2..=top {
            let c = self.count_u64(n).map(|c| c as f64).unwrap_or_else(|| {
                self.count(n).to_f64().unwrap_or(f64::INFINITY)
            });
            if c != 0.0 {
                acc.add(c * (n as f64).ln());
            }
        }
        acc.value()
    }
}

fn clamp_floor(x: f64, limit: usize) -> usize {
    if !(x >= 1.0) {
        0
    } else {
        (x.floor() as usize).min(limit)
    }
}

/// Cumulative ideal counts for O(1) lookups of the summatory function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummatoryTable {
    prefix: Vec<u64>,
}

impl SummatoryTable {
    pub fn limit(&self) -> usize {
        self.prefix.len() - 1
    }

    /// Number of ideals of norm `<= x`; `x` above the limit is a logic error.
    pub fn at(&self, x: f64) -> u64 {
        if !(x >= 1.0) {
            return 0;
        }
        let k = x.floor() as usize;
        assert!(k <= self.limit(), "summatory lookup at {x} beyond sieve limit {}", self.limit());
        self.prefix[k]
    }
}

/// `I_K(n)` for all `n <= x` by a multiplicative sieve over prime powers.
pub fn ideal_count_sieve(field: &FieldDescriptor, x: u64) -> Result<IdealCounts> {
    check_limit(x as f64)?;
    if x < 1 {
        return Err(Error::Domain("ideal_count_sieve needs x >= 1".into()));
    }
    let split = splitting_types_up_to(field, x as f64)?;
    Ok(sieve_from_splitting(&split, x as usize))
}

fn check_limit(x: f64) -> Result<()> {
    if x > DENSE_SIEVE_LIMIT {
        return Err(Error::SieveLimit { x, limit: DENSE_SIEVE_LIMIT });
    }
    Ok(())
}

/// Builds the count row from precomputed splitting types of all `p <= x`.
pub(crate) fn sieve_from_splitting(split: &[SplittingType], x: usize) -> IdealCounts {
    compact_sieve(split, x).unwrap_or_else(|| wide_sieve(split, x))
}

fn prime_power_depth(p: u64, x: usize) -> usize {
    let mut m = 0;
    let mut pk = 1u64;
    while let Some(next) = pk.checked_mul(p) {
        if next > x as u64 {
            break;
        }
        pk = next;
        m += 1;
    }
    m
}

fn for_each_exact_multiple(p: usize, pk: usize, x: usize, mut visit: impl FnMut(usize)) {
    let mut n = pk;
    let mut q = 1usize;
    while n <= x {
        if q % p != 0 {
            visit(n);
        }
        n += pk;
        q += 1;
    }
}

fn compact_sieve(split: &[SplittingType], x: usize) -> Option<IdealCounts> {
    let mut row = vec![1u32; x + 1];
    row[0] = 0;
    for st in split {
        let p = st.p as usize;
        let m = prime_power_depth(st.p, x);
        let local = local_counts(st, m);
        let mut pk = 1usize;
        for k in 1..=m {
            pk *= p;
            let c = local.counts[k].to_u32()?;
            if c == 1 {
                continue;
            }
            let mut overflow = false;
            for_each_exact_multiple(p, pk, x, |n| match row[n].checked_mul(c) {
                Some(v) => row[n] = v,
                None => overflow = true,
            });
            if overflow {
                return None;
            }
        }
    }
    Some(IdealCounts { row: Row::Compact(row) })
}

fn wide_sieve(split: &[SplittingType], x: usize) -> IdealCounts {
    let mut row = vec![BigUint::one(); x + 1];
    row[0] = BigUint::zero();
    for st in split {
        let p = st.p as usize;
        let m = prime_power_depth(st.p, x);
        let local = local_counts(st, m);
        let mut pk = 1usize;
        for k in 1..=m {
            pk *= p;
            let c = &local.counts[k];
            if c.is_one() {
                continue;
            }
            for_each_exact_multiple(p, pk, x, |n| row[n] *= c);
        }
    }
    IdealCounts { row: Row::Wide(row) }
}

/// `IdealSum(x)` with Sunley's envelope `Lambda_K x^{1 - 2/(n+1)}` when defined.
#[derive(Debug, Clone, PartialEq)]
pub struct SummatoryPoint {
    pub x: f64,
    pub value: BigUint,
    pub sunley_envelope: Option<LogMagnitude>,
}

/// Sunley's envelope at `x > 0`; `None` when the constant is undefined.
pub fn sunley_envelope(field: &FieldDescriptor, x: f64) -> Option<LogMagnitude> {
    if !(x > 0.0) {
        return None;
    }
    let n = field.degree();
    let lam = lambda_k(n, field.abs_discriminant()).ok()?;
    let beta = 1.0 - 2.0 / (n as f64 + 1.0);
    Some(lam * LogMagnitude::from_ln(beta * x.ln()))
}

pub fn summatory(field: &FieldDescriptor, x: f64) -> Result<SummatoryPoint> {
    check_limit(x)?;
    let value = if x >= 1.0 {
        let counts = ideal_count_sieve(field, x.floor() as u64)?;
        BigUint::from(counts.summatory_table()?.at(x))
    } else {
        BigUint::zero()
    };
    Ok(SummatoryPoint {
        x,
        value,
        sunley_envelope: sunley_envelope(field, x),
    })
}

/// `T_K(x) = sum_{n <= x} I_K(n) log n`.
pub fn t_k(field: &FieldDescriptor, x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("T_K needs x >= 2, got {x}")));
    }
    check_limit(x)?;
    let counts = ideal_count_sieve(field, x.floor() as u64)?;
    Ok(counts.log_weighted_sum(x))
}

/// `IdealSum(x) / x` together with the half-width `Lambda_K x^{-2/(n+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaEstimate {
    pub residue: Residue,
    pub half_width: Option<LogMagnitude>,
}

pub fn kappa_estimate(field: &FieldDescriptor, x: f64) -> Result<KappaEstimate> {
    if !(x >= 100.0) {
        return Err(Error::Domain(format!("kappa_estimate needs x >= 100, got {x}")));
    }
    let point = summatory(field, x)?;
    let value = point.value.to_f64().unwrap_or(f64::INFINITY) / x;
    Ok(KappaEstimate {
        residue: Residue::new(value, ResidueProvenance::EstimatedFromIdealCount)?,
        half_width: point
            .sunley_envelope
            .map(|env| env / LogMagnitude::from_ln(x.ln())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::load_field;

    fn st(p: u64, pairs: &[(u32, u32)]) -> SplittingType {
        SplittingType { p, pairs: pairs.to_vec() }
    }

    fn small(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&c| BigUint::from(c)).collect()
    }

    #[test]
    fn local_count_examples() {
        assert_eq!(local_counts(&st(5, &[(1, 1), (1, 1)]), 2).counts, small(&[1, 2, 3]));
        assert_eq!(local_counts(&st(7, &[(1, 2)]), 3).counts, small(&[1, 0, 1, 0]));
        assert_eq!(local_counts(&st(2, &[(2, 1)]), 2).counts, small(&[1, 1, 1]));
        // 1/((1-t)(1-t^2)) -> 1,1,2,2,3
        assert_eq!(local_counts(&st(3, &[(1, 1), (1, 2)]), 4).counts, small(&[1, 1, 2, 2, 3]));
    }

    #[test]
    fn sieve_examples() {
        let gauss = load_field("poly = [1, 0, 1]").unwrap();
        let row = ideal_count_sieve(&gauss, 10).unwrap();
        assert!(row.is_compact());
        assert_eq!(row.to_vec(), small(&[1, 1, 0, 1, 2, 0, 0, 1, 1, 2]));
        let q = FieldDescriptor::rational();
        assert_eq!(ideal_count_sieve(&q, 5).unwrap().to_vec(), small(&[1; 5]));
        let golden = load_field("poly = [-1, -1, 1]").unwrap();
        assert_eq!(ideal_count_sieve(&golden, 5).unwrap().to_vec(), small(&[1, 0, 0, 1, 1]));
    }

    #[test]
    fn wide_and_compact_agree() {
        let gauss = load_field("poly = [1, 0, 1]").unwrap();
        let split = splitting_types_up_to(&gauss, 500.0).unwrap();
        let a = compact_sieve(&split, 500).unwrap();
        let b = wide_sieve(&split, 500);
        assert_eq!(a.to_vec(), b.to_vec());
    }

    #[test]
    fn summatory_examples() {
        let gauss = load_field("poly = [1, 0, 1]").unwrap();
        assert_eq!(summatory(&gauss, 10.0).unwrap().value, BigUint::from(9u32));
        assert_eq!(summatory(&gauss, 0.5).unwrap().value, BigUint::zero());
        let q = FieldDescriptor::rational();
        let p = summatory(&q, 7.9).unwrap();
        assert_eq!(p.value, BigUint::from(7u32));
        assert!(p.sunley_envelope.is_none());
        assert!(summatory(&q, 2e8).is_err());
    }

    #[test]
    fn log_weighted_examples() {
        let gauss = load_field("poly = [1, 0, 1]").unwrap();
        let want = 2f64.ln() + 4f64.ln() + 2.0 * 5f64.ln();
        assert!((t_k(&gauss, 5.0).unwrap() - want).abs() < 1e-14);
        let q = FieldDescriptor::rational();
        assert!((t_k(&q, 4.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        let golden = load_field("poly = [-1, -1, 1]").unwrap();
        assert_eq!(t_k(&golden, 2.0).unwrap(), 0.0);
        assert!(t_k(&q, 1.5).is_err());
    }

    #[test]
    fn rational_estimate() {
        let q = FieldDescriptor::rational();
        let est = kappa_estimate(&q, 1000.0).unwrap();
        assert!((est.residue.value - 1.0).abs() <= 1e-3);
        assert_eq!(est.residue.provenance, ResidueProvenance::EstimatedFromIdealCount);
        assert!(kappa_estimate(&q, 50.0).is_err());
    }
}
