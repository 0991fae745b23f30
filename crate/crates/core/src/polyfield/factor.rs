//! Factorization over F_p: squarefree decomposition, distinct-degree
//! splitting, then Cantor–Zassenhaus equal-degree splitting driven by a
//! fixed-seed generator.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modpoly::{is_prime_u64, ModPoly};
use crate::error::{Error, Result};

/// Seed for the equal-degree splitting generator.
pub const DEFAULT_FACTOR_SEED: u64 = 0x6d65_7274_656e_73;

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with each
/// `g` squarefree, pairwise coprime, and `f = prod g^m`.
pub fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let p = f.modulus();
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if fac.degree() > 0 {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root();
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree splitting of a monic squarefree polynomial: pairs
/// `(d, g)` where `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree_split(f: &ModPoly) -> Vec<(usize, ModPoly)> {
    let p = f.modulus();
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = ModPoly::x(p);
    let mut frob = x.clone();
    let mut d = 0usize;
    while rest.degree() >= 2 * (d + 1) {
        d += 1;
        frob = frob.pow_mod_u64(p, &rest);
        let g = rest.gcd(&frob.sub(&x));
        if g.degree() > 0 {
            rest = rest.div_exact(&g);
            frob = frob.rem(&rest);
            out.push((d, g));
        }
    }
    if rest.degree() > 0 {
        out.push((rest.degree(), rest));
    }
    out
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
pub fn equal_degree_split(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let f = f.monic();
    let n = f.degree();
    if n == d {
        return vec![f];
    }
    debug_assert!(n % d == 0);
    let p = f.modulus();
    let exp = if p == 2 {
        None
    } else {
        let q = BigUint::from(p).pow(d as u32);
        Some((q - BigUint::one()) >> 1)
    };
    loop {
        let a = ModPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        let b = match &exp {
            Some(e) => a.pow_mod_big(e, &f).sub(&ModPoly::one(p)),
            None => trace_map(&a, d, &f),
        };
        let g = f.gcd(&b);
        if g.degree() > 0 && g.degree() < n {
            let h = f.div_exact(&g);
            let mut out = equal_degree_split(&g, d, rng);
            out.extend(equal_degree_split(&h, d, rng));
            return out;
        }
    }
}

// a + a^2 + a^4 + ... + a^{2^{d-1}} mod f, over F_2
fn trace_map(a: &ModPoly, d: usize, f: &ModPoly) -> ModPoly {
    let mut term = a.rem(f);
    let mut acc = term.clone();
    for _ in 1..d {
        term = term.mul_mod_poly(&term, f);
        acc = acc.add(&term);
    }
    acc
}

/// Full factorization of `f` over F_p into monic irreducibles with
/// multiplicities, sorted by degree then coefficients. The leading unit is
/// dropped.
pub fn factor_mod_p(f: &ModPoly) -> Result<Vec<(ModPoly, u32)>> {
    factor_mod_p_seeded(f, DEFAULT_FACTOR_SEED)
}

pub fn factor_mod_p_seeded(f: &ModPoly, seed: u64) -> Result<Vec<(ModPoly, u32)>> {
    let p = f.modulus();
    if !is_prime_u64(p) {
        return Err(Error::CompositeModulus(p));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for (d, part) in distinct_degree_split(&g) {
            for irr in equal_degree_split(&part, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Degree pattern `(degree, multiplicity)` of the irreducible factors, without
/// the equal-degree stage. Sorted like `factor_mod_p`'s degrees.
pub fn factor_degrees_mod_p(f: &ModPoly) -> Result<Vec<(usize, u32)>> {
    let p = f.modulus();
    if !is_prime_u64(p) {
        return Err(Error::CompositeModulus(p));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for (d, part) in distinct_degree_split(&g) {
            for _ in 0..part.degree() / d {
                out.push((d, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(factors: &[(ModPoly, u32)], p: u64) -> ModPoly {
        factors.iter().fold(ModPoly::one(p), |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| a.mul(g))
        })
    }

    #[test]
    fn spec_examples() {
        let f5 = factor_mod_p(&ModPoly::from_i64(5, &[1, 0, 1])).unwrap();
        assert_eq!(
            f5,
            vec![(ModPoly::from_i64(5, &[2, 1]), 1), (ModPoly::from_i64(5, &[3, 1]), 1)]
        );
        let f7 = factor_mod_p(&ModPoly::from_i64(7, &[1, 0, 1])).unwrap();
        assert_eq!(f7, vec![(ModPoly::from_i64(7, &[1, 0, 1]), 1)]);
        let f2 = factor_mod_p(&ModPoly::from_i64(2, &[1, 0, 1])).unwrap();
        assert_eq!(f2, vec![(ModPoly::from_i64(2, &[1, 1]), 2)]);
    }

    #[test]
    fn composite_modulus_rejected() {
        let err = factor_mod_p(&ModPoly::from_i64(9, &[1, 0, 1])).unwrap_err();
        assert_eq!(err, Error::CompositeModulus(9));
    }

    #[test]
    fn pth_powers_in_char_p() {
        // (x^2 + 1)^3 * (x + 1)^2 over F_3: derivative has vanishing parts
        let p = 3;
        let a = ModPoly::from_i64(p, &[1, 0, 1]);
        let b = ModPoly::from_i64(p, &[1, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let got = factor_mod_p(&f).unwrap();
        assert_eq!(got, vec![(b.clone(), 2), (a.clone(), 3)]);
        assert_eq!(product(&got, p), f);
    }

    #[test]
    fn char_two_equal_degree() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible over F_2; (x^2+x+1)(x^3+x+1) splits
        let p = 2;
        let a = ModPoly::from_i64(p, &[1, 1, 1]);
        let b = ModPoly::from_i64(p, &[1, 1, 0, 1]);
        let c = ModPoly::from_i64(p, &[1, 0, 1, 1]);
        let f = a.mul(&b).mul(&c);
        let got = factor_mod_p(&f).unwrap();
        assert_eq!(got.len(), 3);
        assert_eq!(product(&got, p), f);
        assert_eq!(got[0].0, a);
    }

    #[test]
    fn deterministic_across_calls() {
        let f = ModPoly::from_i64(1_000_003, &[-1, 0, 0, 0, 0, 0, 1]);
        let a = factor_mod_p(&f).unwrap();
        let b = factor_mod_p(&f).unwrap();
        assert_eq!(a, b);
        assert_eq!(product(&a, 1_000_003), f);
    }
}
