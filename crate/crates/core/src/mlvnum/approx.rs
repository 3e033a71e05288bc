use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported precision: values are carried in double precision.
pub const MAX_DIGITS: u32 = 15;

/// Requested number of correct decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision(u32);

impl Precision {
    pub fn digits(digits: u32) -> Result<Self> {
        if digits == 0 || digits > MAX_DIGITS {
            return Err(Error::Invalid(format!(
                "precision must be between 1 and {MAX_DIGITS} digits, got {digits}"
            )));
        }
        Ok(Precision(digits))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Target size of truncation errors.
    pub fn tolerance(self) -> f64 {
        10f64.powi(-(self.0 as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(12)
    }
}

/// A complex number together with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxValue {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub error: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl ApproxValue {
    pub fn exact(value: Complex64) -> Self {
        ApproxValue { value, error: 0.0 }
    }

    pub fn real(x: f64, error: f64) -> Self {
        ApproxValue {
            value: Complex64::new(x, 0.0),
            error,
        }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    /// Whether `z` lies within the error bound widened by `slack`.
    pub fn agrees_with(&self, z: Complex64, slack: f64) -> bool {
        (self.value - z).norm() <= self.error + slack
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ApproxValue {
            value: self.value * c,
            error: self.error * c.norm(),
        }
    }
}

impl Add for ApproxValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ApproxValue {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

impl Sub for ApproxValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ApproxValue {
    type Output = Self;
    fn neg(self) -> Self {
        ApproxValue {
            value: -self.value,
            error: self.error,
        }
    }
}

impl Mul for ApproxValue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ApproxValue {
            value: self.value * o.value,
            error: self.value.norm() * o.error + o.value.norm() * self.error + self.error * o.error,
        }
    }
}

impl fmt::Display for ApproxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.im == 0.0 {
            write!(f, "{:.15e} ± {:.1e}", self.value.re, self.error)
        } else {
            write!(f, "{:.15e}{:+.15e}i ± {:.1e}", self.value.re, self.value.im, self.error)
        }
    }
}

/// `e^{2πi a/N}`.
pub fn root_of_unity(level: u32, a: i64) -> Complex64 {
    let a = a.rem_euclid(level as i64);
    // quarter turns are exact
    if (4 * a) % level as i64 == 0 {
        return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
            [(4 * a / level as i64) as usize];
    }
    let t = 2.0 * std::f64::consts::PI * (a as f64) / level as f64;
    Complex64::from_polar(1.0, t)
}
