use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense polynomial over Z, coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Evaluate at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Reduce every coefficient into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue fits u64"))
            .collect()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Discriminant `(-1)^{d(d-1)/2} Res(f, f') / lc(f)`, exact.
pub fn poly_discriminant(f: &IntPoly) -> Result<BigInt> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::Domain("discriminant of a constant".into()));
    }
    let df = f.derivative();
    let res = resultant(f, &df);
    let lc = f.leading().expect("nonzero");
    let (q, r) = res.div_rem(lc);
    debug_assert!(r.is_zero(), "lc divides Res(f, f')");
    let sign_flip = (d * (d - 1) / 2) % 2 == 1;
    Ok(if sign_flip { -q } else { q })
}

/// Resultant via the Sylvester matrix and a fraction-free determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let m = f.degree();
    let n = g.degree();
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // n rows of f, m rows of g; coefficients highest degree first
    for r in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Bareiss fraction-free elimination; every division is exact.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(poly_discriminant(&IntPoly::from_i64(&[1, 0, 1])).unwrap(), BigInt::from(-4));
        assert_eq!(poly_discriminant(&IntPoly::from_i64(&[-1, -1, 1])).unwrap(), BigInt::from(5));
        assert_eq!(poly_discriminant(&IntPoly::from_i64(&[-3, 1])).unwrap(), BigInt::from(1));
        assert_eq!(poly_discriminant(&IntPoly::new(vec![])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn cubic_discriminants_match_closed_form() {
        // x^3 + a x + b  ->  -4a^3 - 27b^2
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let f = IntPoly::from_i64(&[b, a, 0, 1]);
                let want = -4 * a.pow(3) - 27 * b * b;
                assert_eq!(poly_discriminant(&f).unwrap(), BigInt::from(want), "a={a} b={b}");
            }
        }
        assert_eq!(poly_discriminant(&IntPoly::from_i64(&[-1, -2, 1, 1])).unwrap(), BigInt::from(49));
        assert_eq!(poly_discriminant(&IntPoly::from_i64(&[-8, -2, -1, 1])).unwrap(), BigInt::from(-2012));
    }

    #[test]
    fn nonmonic_quadratic() {
        // 2x^2 + 3x + 1 -> 9 - 8
        assert_eq!(poly_discriminant(&IntPoly::from_i64(&[1, 3, 2])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(IntPoly::from_i64(&[1, 0, 1]).to_string(), "x^2 + 1");
        assert_eq!(IntPoly::from_i64(&[-8, -2, -1, 1]).to_string(), "x^3 - x^2 - 2x - 8");
    }
}
