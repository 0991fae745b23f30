//! Small numeric helpers shared by the summation modules.

use std::ops::AddAssign;

/// Euler–Mascheroni constant to 40 significant digits.
pub const EULER_GAMMA_DIGITS: &str = "0.5772156649015328606065120900824024310422";

/// `EULER_GAMMA_DIGITS` rounded to double precision.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Kahan–Babuška–Neumaier running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

/// Render with `digits` significant digits. Plain decimal for moderate
/// magnitudes, scientific otherwise.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, v);
        trim_zeros(&s)
    } else {
        let s = format!("{:.*e}", digits - 1, v);
        match s.split_once('e') {
            Some((mant, e)) => format!("{}e{}", trim_zeros(mant), e),
            None => s,
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s.to_string()
    }
}

/// `ln(n!)` by direct summation; exact enough for the degrees in play.
pub fn ln_factorial(n: u32) -> f64 {
    compensated_sum((2..=n).map(|k| (k as f64).ln()))
}

pub fn factorial_f64(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_small_terms() {
        let mut s = NeumaierSum::new();
        s += 1.0;
        s += 1e100;
        s += 1.0;
        s += -1e100;
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn gamma_digits_match_double() {
        let parsed: f64 = EULER_GAMMA_DIGITS.parse().unwrap();
        assert_eq!(parsed, EULER_GAMMA);
        assert_eq!(format!("{:.4}", EULER_GAMMA), "0.5772");
    }

    #[test]
    fn formatting() {
        assert_eq!(format_sig(0.25, 15), "0.25");
        assert_eq!(format_sig(1.0 / 3.0, 15), "0.333333333333333");
        assert_eq!(format_sig(1e20, 15), "1e20");
        assert_eq!(format_sig(-2.5e-9, 3), "-2.5e-9");
        assert_eq!(format_sig(1_000_000.0, 15), "1000000");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial_f64(5), 120.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
    }
}
