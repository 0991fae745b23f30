use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::format_sig;

/// A positive real stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    natural_log: f64,
}

/// Above this logarithm the value is rendered as `exp(L)`.
pub const RENDER_LN_LIMIT: f64 = 700.0;

impl LogMagnitude {
    pub fn from_ln(natural_log: f64) -> Self {
        LogMagnitude { natural_log }
    }

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self::from_ln(value.ln()))
        } else {
            Err(Error::Domain(format!("log-magnitude of non-positive value {value}")))
        }
    }

    pub fn one() -> Self {
        Self::from_ln(0.0)
    }

    pub fn ln(&self) -> f64 {
        self.natural_log
    }

    /// Linear value; `inf` once the logarithm exceeds the f64 range.
    pub fn value(&self) -> f64 {
        self.natural_log.exp()
    }

    pub fn powf(self, exponent: f64) -> Self {
        Self::from_ln(self.natural_log * exponent)
    }

    /// Multiply by a positive plain number.
    pub fn scale(self, k: f64) -> Self {
        debug_assert!(k > 0.0);
        Self::from_ln(self.natural_log + k.ln())
    }

    pub fn sum<I: IntoIterator<Item = LogMagnitude>>(terms: I) -> Option<Self> {
        let logs: Vec<f64> = terms.into_iter().map(|t| t.natural_log).collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if logs.is_empty() {
            return None;
        }
        if max.is_infinite() {
            return Some(Self::from_ln(max));
        }
        let s: f64 = logs.iter().map(|l| (l - max).exp()).sum();
        Some(Self::from_ln(max + s.ln()))
    }

    pub fn render(&self) -> String {
        if self.natural_log < RENDER_LN_LIMIT {
            format_sig(self.value(), 15)
        } else {
            format!("exp({})", format_sig(self.natural_log, 15))
        }
    }
}

impl Add for LogMagnitude {
    type Output = LogMagnitude;

    fn add(self, rhs: LogMagnitude) -> LogMagnitude {
        let (hi, lo) = if self.natural_log >= rhs.natural_log {
            (self.natural_log, rhs.natural_log)
        } else {
            (rhs.natural_log, self.natural_log)
        };
        if lo == f64::NEG_INFINITY {
            return Self::from_ln(hi);
        }
        Self::from_ln(hi + (lo - hi).exp().ln_1p())
    }
}

impl Mul for LogMagnitude {
    type Output = LogMagnitude;

    fn mul(self, rhs: LogMagnitude) -> LogMagnitude {
        Self::from_ln(self.natural_log + rhs.natural_log)
    }
}

impl Div for LogMagnitude {
    type Output = LogMagnitude;

    fn div(self, rhs: LogMagnitude) -> LogMagnitude {
        Self::from_ln(self.natural_log - rhs.natural_log)
    }
}

impl PartialOrd for LogMagnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.natural_log.partial_cmp(&other.natural_log)
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for LogMagnitude {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LogMagnitude", 2)?;
        st.serialize_field("natural_log", &self.natural_log)?;
        st.serialize_field("value", &self.render())?;
        st.end()
    }
}
