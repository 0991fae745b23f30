//! Exact polynomial arithmetic over Z and over prime fields F_p.

mod factor;
mod intpoly;
mod modpoly;

pub use factor::{
    distinct_degree_split, equal_degree_split, factor_degrees_mod_p, factor_mod_p,
    factor_mod_p_seeded, squarefree_decomposition, DEFAULT_FACTOR_SEED,
};
pub use intpoly::{poly_discriminant, resultant, IntPoly};
pub use modpoly::{is_prime_u64, ModPoly};
pub(crate) use modpoly::pow_mod;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Reduce an integer polynomial mod p.
pub fn reduce(f: &IntPoly, p: u64) -> ModPoly {
    ModPoly::new(p, f.reduce_mod(p))
}

fn lift(g: &ModPoly) -> IntPoly {
    IntPoly::new(g.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() || b.is_zero() {
        return IntPoly::new(vec![]);
    }
    let mut out = vec![BigInt::zero(); a.coeffs().len() + b.coeffs().len() - 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPoly::new(out)
}

/// Dedekind criterion: `true` iff `p` does not divide `[O_K : Z[theta]]`
/// for the field generated by a root of the monic `f`.
pub fn dedekind_index_test(f: &IntPoly, p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::CompositeModulus(p));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::invariant(
            "monic defining polynomial",
            format!("{f} is not monic"),
        ));
    }
    let fbar = reduce(f, p);
    let factors = factor_mod_p(&fbar)?;
    if factors.iter().all(|(_, e)| *e == 1) {
        return Ok(true);
    }
    let gbar = factors
        .iter()
        .fold(ModPoly::one(p), |acc, (g, _)| acc.mul(g));
    let hbar = fbar.div_exact(&gbar);

    let gh = int_mul(&lift(&gbar), &lift(&hbar));
    let n = gh.coeffs().len().max(f.coeffs().len());
    let pb = BigInt::from(p);
    let diff: Vec<BigInt> = (0..n)
        .map(|i| {
            let a = gh.coeffs().get(i).cloned().unwrap_or_default();
            let b = f.coeffs().get(i).cloned().unwrap_or_default();
            let d = a - b;
            let (q, r) = d.div_rem(&pb);
            debug_assert!(r.is_zero());
            q
        })
        .collect();
    let fcorr = reduce(&IntPoly::new(diff), p);
    let common = fcorr.gcd(&gbar).gcd(&hbar);
    Ok(common.degree() == 0 && !common.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedekind_examples() {
        let gauss = IntPoly::from_i64(&[1, 0, 1]);
        assert!(dedekind_index_test(&gauss, 5).unwrap());
        assert!(dedekind_index_test(&gauss, 2).unwrap());
        let root5 = IntPoly::from_i64(&[-5, 0, 1]);
        assert!(!dedekind_index_test(&root5, 2).unwrap());
        assert!(dedekind_index_test(&root5, 5).unwrap());
        let golden = IntPoly::from_i64(&[-1, -1, 1]);
        assert!(dedekind_index_test(&golden, 5).unwrap());
    }

    #[test]
    fn classical_nonmonogenic_cubic() {
        // x^3 - x^2 - 2x - 8: Z[theta] has index 2 in O_K
        let f = IntPoly::from_i64(&[-8, -2, -1, 1]);
        assert!(!dedekind_index_test(&f, 2).unwrap());
        assert!(dedekind_index_test(&f, 503).unwrap());
    }

    #[test]
    fn composite_rejected() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(dedekind_index_test(&f, 15), Err(Error::CompositeModulus(15)));
    }

    #[test]
    fn index_square_examples() {
        // x^2 - 12 = x^2 - 4*3: Z[2 sqrt 3] has index 2 in Z[sqrt 3]
        assert!(!dedekind_index_test(&IntPoly::from_i64(&[-12, 0, 1]), 2).unwrap());
        // x^2 - 18: index 3 in Z[sqrt 2]
        assert!(!dedekind_index_test(&IntPoly::from_i64(&[-18, 0, 1]), 3).unwrap());
        assert!(dedekind_index_test(&IntPoly::from_i64(&[-2, 0, 1]), 2).unwrap());
    }
}
