//! Coefficient rings for series: exact rationals and double-precision complex numbers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Canonical text form: `p/q` in lowest terms, integers without denominator.
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || Error::parse(format!("rational {s:?}"), "expected p or p/q");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.as_str(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(format!("rational {s:?}"), "zero denominator"));
    }
    Ok(Q::new(n, d))
}

/// Ring operations shared by exact and floating coefficients.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(x: &Q) -> Self;
    /// Absolute value used in residual reports.
    fn magnitude(&self) -> f64;
    /// `self · x` for a rational `x`.
    fn mul_q(&self, x: &Q) -> Self {
        self.clone() * Self::from_q(x)
    }
}

impl Scalar for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(&self.abs())
    }
    fn mul_q(&self, x: &Q) -> Self {
        self * x
    }
}

impl Scalar for Complex64 {
    fn from_q(x: &Q) -> Self {
        Complex64::new(q_to_f64(x), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

pub fn factorial(n: u32) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * qi(k))
}
