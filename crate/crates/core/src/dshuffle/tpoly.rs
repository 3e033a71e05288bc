use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::Q;

/// A polynomial in the formal variable `T` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPoly {
    coeffs: Vec<Q>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        TPoly::from_coeffs(vec![c])
    }

    pub fn t() -> Self {
        TPoly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn monomial(n: usize, c: Q) -> Self {
        let mut v = vec![Q::zero(); n + 1];
        v[n] = c;
        TPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    /// Coefficients from `T^0` upward, without trailing zeros.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Q) -> Self {
        TPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, o: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        TPoly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, o: &TPoly) -> TPoly {
        self + &(-o)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, o: &TPoly) -> TPoly {
        if self.is_zero() || o.is_zero() {
            return TPoly::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        TPoly::from_coeffs(v)
    }
}

/// Highest power first, e.g. `1/2*T^2 - 1/24`.
impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = c.abs();
            match n {
                0 => write!(f, "{m}")?,
                _ => {
                    if !m.is_one() {
                        write!(f, "{m}*")?;
                    }
                    if n == 1 {
                        write!(f, "T")?;
                    } else {
                        write!(f, "T^{n}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
