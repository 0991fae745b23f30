//! Rational primes, splitting of primes in a number field, and the stream of
//! prime ideals ordered by norm.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::numeric::NeumaierSum;
use crate::polyfield::{
    dedekind_index_test, factor_degrees_mod_p, factor_mod_p_seeded, is_prime_u64, pow_mod, reduce,
};

/// Integers per sieve segment.
pub const SEGMENT_LEN: usize = 1 << 20;

/// Calls `visit` on every prime in `[2, x]` in ascending order.
pub fn for_each_prime(x: f64, mut visit: impl FnMut(u64)) {
    if !(x >= 2.0) {
        return;
    }
    let limit = x.floor().min(u64::MAX as f64) as u64;
    let root = limit.sqrt();
    let base = small_primes(root);
    let mut lo = 2u64;
    let mut seg = vec![true; SEGMENT_LEN];
    while lo <= limit {
        let hi = limit.min(lo.saturating_add(SEGMENT_LEN as u64 - 1));
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &q in &base {
            if q * q > hi {
                break;
            }
            let start = (q * q).max(lo.div_ceil(q) * q);
            let mut m = start;
            while m <= hi {
                seg[(m - lo) as usize] = false;
                m += q;
            }
        }
        for (i, &is_p) in seg[..len].iter().enumerate() {
            if is_p {
                visit(lo + i as u64);
            }
        }
        if hi == u64::MAX {
            break;
        }
        lo = hi + 1;
    }
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut mark = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if mark[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                mark[j] = false;
                j += i;
            }
        }
    }
    out
}

/// The primes `<= x`, ascending.
pub fn rational_primes(x: f64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime(x, |p| out.push(p));
    out
}

/// Chebyshev's `theta(x) = sum_{p <= x} log p`.
pub fn chebyshev_theta(x: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    for_each_prime(x, |p| acc.add((p as f64).ln()));
    acc.value()
}

/// Kronecker symbol `(d | p)` for a prime `p`.
pub fn kronecker_at_prime(d: &BigInt, p: u64) -> i8 {
    if p == 2 {
        let r = d.mod_floor(&BigInt::from(8)).to_u64().unwrap_or(0);
        return match r {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let a = d.mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Factorization pattern of `p O_K`: pairs `(e, f)` sorted by `f`, then `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub p: u64,
    pub pairs: Vec<(u32, u32)>,
}

impl SplittingType {
    pub fn inertia_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|&(_, f)| f)
    }

    pub fn is_ramified(&self) -> bool {
        self.pairs.iter().any(|&(e, _)| e > 1)
    }

    /// `sum e_i f_i`, which equals the field degree.
    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|&(e, f)| e * f).sum()
    }
}

pub fn splitting_type(field: &FieldDescriptor, p: u64) -> Result<SplittingType> {
    if !is_prime_u64(p) {
        return Err(Error::CompositeModulus(p));
    }
    let n = field.degree();
    let mut pairs: Vec<(u32, u32)> = match n {
        1 => vec![(1, 1)],
        2 => match kronecker_at_prime(field.discriminant(), p) {
            1 => vec![(1, 1), (1, 1)],
            -1 => vec![(1, 2)],
            _ => vec![(2, 1)],
        },
        _ => {
            let poly = field.defining_poly();
            let fbar = reduce(poly, p);
            if !(field.poly_discriminant() % BigInt::from(p)).is_zero() {
                factor_degrees_mod_p(&fbar)?
                    .into_iter()
                    .map(|(d, m)| (m, d as u32))
                    .collect()
            } else {
                if !dedekind_index_test(poly, p)? {
                    return Err(Error::IndexPrimeUnsupported { p });
                }
                factor_mod_p_seeded(&fbar, field.factor_seed())?
                    .into_iter()
                    .map(|(g, m)| (m, g.degree() as u32))
                    .collect()
            }
        }
    };
    pairs.sort_by_key(|&(e, f)| (f, e));
    let st = SplittingType { p, pairs };
    if st.degree() != n {
        return Err(Error::invariant(
            "sum e_i f_i = n_K",
            format!("p = {p}: pairs {:?} for degree {n}", st.pairs),
        ));
    }
    Ok(st)
}

/// Splitting types of all primes `<= x`, ascending in `p`.
pub fn splitting_types_up_to(field: &FieldDescriptor, x: f64) -> Result<Vec<SplittingType>> {
    let primes = rational_primes(x);
    primes
        .par_chunks(4096)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&p| splitting_type(field, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map(|parts| parts.into_iter().flatten().collect())
}

/// One prime ideal over `p` with inertia degree `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PrimeIdealRecord {
    pub norm: u64,
    pub p: u64,
    pub f: u32,
}

impl PrimeIdealRecord {
    pub fn new(p: u64, f: u32) -> Option<Self> {
        p.checked_pow(f).map(|norm| PrimeIdealRecord { norm, p, f })
    }
}

/// Every prime ideal of norm `<= x`, one record per ideal, sorted by
/// `(norm, p)`.
pub fn prime_ideals_up_to(field: &FieldDescriptor, x: f64) -> Result<Vec<PrimeIdealRecord>> {
    let split = splitting_types_up_to(field, x)?;
    Ok(ideals_from_splitting(&split, x))
}

pub(crate) fn ideals_from_splitting(split: &[SplittingType], x: f64) -> Vec<PrimeIdealRecord> {
    let mut out: Vec<PrimeIdealRecord> = split
        .iter()
        .flat_map(|st| {
            st.inertia_degrees()
                .filter_map(move |f| PrimeIdealRecord::new(st.p, f))
                .filter(|r| (r.norm as f64) <= x)
        })
        .collect();
    out.sort_unstable();
    out
}

/// `theta_K(x) = sum_{N(P) <= x} log N(P)`.
pub fn theta_k(field: &FieldDescriptor, x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Ok(0.0);
    }
    let ideals = prime_ideals_up_to(field, x)?;
    Ok(ideals
        .iter()
        .map(|r| (r.norm as f64).ln())
        .collect::<NeumaierSum>()
        .value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::load_field;

    fn gauss() -> FieldDescriptor {
        load_field("poly = [1, 0, 1]").unwrap()
    }

    #[test]
    fn small_prime_lists() {
        assert_eq!(rational_primes(10.0), vec![2, 3, 5, 7]);
        assert!(rational_primes(1.0).is_empty());
        assert!(rational_primes(-3.0).is_empty());
        assert_eq!(rational_primes(2.0), vec![2]);
        assert_eq!(rational_primes(1e6).len(), 78_498);
    }

    #[test]
    fn segments_join_cleanly() {
        let x = 3.0 * SEGMENT_LEN as f64 + 17.0;
        let got = rational_primes(x);
        let naive: Vec<u64> = (2..=x as u64).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(got, naive);
    }

    #[test]
    fn gaussian_splitting() {
        let k = gauss();
        assert_eq!(splitting_type(&k, 5).unwrap().pairs, vec![(1, 1), (1, 1)]);
        assert_eq!(splitting_type(&k, 7).unwrap().pairs, vec![(1, 2)]);
        assert_eq!(splitting_type(&k, 2).unwrap().pairs, vec![(2, 1)]);
        assert_eq!(splitting_type(&k, 9), Err(Error::CompositeModulus(9)));
    }

    #[test]
    fn gaussian_ideal_stream() {
        let k = gauss();
        let got = prime_ideals_up_to(&k, 5.0).unwrap();
        let want: Vec<_> = [(2, 1), (5, 1), (5, 1)]
            .iter()
            .map(|&(p, f)| PrimeIdealRecord::new(p, f).unwrap())
            .collect();
        assert_eq!(got, want);
        assert_eq!(
            prime_ideals_up_to(&k, 3.5).unwrap(),
            vec![PrimeIdealRecord::new(2, 1).unwrap()]
        );
    }

    #[test]
    fn golden_field_at_two() {
        let k = load_field("poly = [-1, -1, 1]").unwrap();
        assert!(prime_ideals_up_to(&k, 2.0).unwrap().is_empty());
        assert_eq!(splitting_type(&k, 2).unwrap().pairs, vec![(1, 2)]);
        assert_eq!(splitting_type(&k, 5).unwrap().pairs, vec![(2, 1)]);
    }

    #[test]
    fn theta_examples() {
        let q = FieldDescriptor::rational();
        assert!((theta_k(&q, 10.0).unwrap() - 210f64.ln()).abs() < 1e-14);
        let want = 2f64.ln() + 2.0 * 5f64.ln();
        assert!((theta_k(&gauss(), 5.0).unwrap() - want).abs() < 1e-14);
        assert_eq!(theta_k(&gauss(), 1.5).unwrap(), 0.0);
        assert!((chebyshev_theta(10.0) - 210f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn cubic_index_prime_is_an_error() {
        let k = load_field("poly = [-8, -2, -1, 1]\nsignature = [1, 1]\ndiscriminant = -503").unwrap();
        assert_eq!(splitting_type(&k, 2), Err(Error::IndexPrimeUnsupported { p: 2 }));
        assert_eq!(
            prime_ideals_up_to(&k, 100.0),
            Err(Error::IndexPrimeUnsupported { p: 2 })
        );
        let st = splitting_type(&k, 503).unwrap();
        assert_eq!(st.degree(), 3);
        assert!(st.is_ramified());
    }

    #[test]
    fn cyclic_cubic_splitting() {
        let k = load_field("poly = [-1, -2, 1, 1]\nsignature = [3, 0]\ndiscriminant = 49").unwrap();
        assert_eq!(splitting_type(&k, 7).unwrap().pairs, vec![(3, 1)]);
        assert_eq!(splitting_type(&k, 13).unwrap().pairs, vec![(1, 1), (1, 1), (1, 1)]);
        assert_eq!(splitting_type(&k, 2).unwrap().pairs, vec![(1, 3)]);
    }

    #[test]
    fn kronecker_values() {
        let d = BigInt::from(5);
        assert_eq!(kronecker_at_prime(&d, 2), -1);
        assert_eq!(kronecker_at_prime(&d, 11), 1);
        assert_eq!(kronecker_at_prime(&d, 5), 0);
        assert_eq!(kronecker_at_prime(&BigInt::from(-4), 2), 0);
        assert_eq!(kronecker_at_prime(&BigInt::from(-7), 2), 1);
        assert_eq!(kronecker_at_prime(&BigInt::from(-3), 7), 1);
    }
}
