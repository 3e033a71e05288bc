use std::collections::BTreeMap;
use std::sync::Arc;

use super::alphabet::Alphabet;
use super::series::Series;
use super::word::Word;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of `A ⊗ A` for the free algebra `A` on an alphabet, truncated at
/// total degree `maxdeg`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2<C> {
    alpha: Arc<Alphabet>,
    maxdeg: u32,
    terms: BTreeMap<(Word, Word), C>,
}

impl<C: Scalar> Tensor2<C> {
    pub fn zero(alpha: &Arc<Alphabet>, maxdeg: u32) -> Self {
        Tensor2 {
            alpha: alpha.clone(),
            maxdeg,
            terms: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, u: &Word, v: &Word) -> C {
        self.terms
            .get(&(u.clone(), v.clone()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, u: Word, v: Word, c: C) {
        if c.is_zero() || u.degree(&self.alpha) + v.degree(&self.alpha) > self.maxdeg {
            return;
        }
        let key = (u, v);
        let nv = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !nv.is_zero() {
            self.terms.insert(key, nv);
        }
    }

    /// `a ⊗ b`, truncated at total degree.
    pub fn tensor(a: &Series<C>, b: &Series<C>) -> Result<Self> {
        if a.alphabet() != b.alphabet() {
            return Err(Error::AlphabetMismatch(
                a.alphabet().to_string(),
                b.alphabet().to_string(),
            ));
        }
        if a.maxdeg() != b.maxdeg() {
            return Err(Error::TruncationMismatch(a.maxdeg(), b.maxdeg()));
        }
        let mut out = Self::zero(a.alphabet(), a.maxdeg());
        for (u, cu) in a.terms() {
            let du = u.degree(a.alphabet());
            for (v, cv) in b.terms() {
                if du + v.degree(a.alphabet()) <= a.maxdeg() {
                    out.add_term(u.clone(), v.clone(), cu.clone() * cv.clone());
                }
            }
        }
        Ok(out)
    }

    /// Standard coproduct with primitive letters: each word maps to the sum
    /// of its splittings into complementary subsequences.
    pub fn coproduct(s: &Series<C>) -> Self {
        let mut out = Self::zero(s.alphabet(), s.maxdeg());
        for (w, c) in s.terms() {
            let n = w.len();
            assert!(n < 64, "word too long for coproduct");
            for mask in 0u64..(1u64 << n) {
                let mut u = Word::empty();
                let mut v = Word::empty();
                for (i, &l) in w.letters().iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        u.0.push(l);
                    } else {
                        v.0.push(l);
                    }
                }
                out.add_term(u, v, c.clone());
            }
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alpha != other.alpha {
            return Err(Error::AlphabetMismatch(
                self.alpha.to_string(),
                other.alpha.to_string(),
            ));
        }
        if self.maxdeg != other.maxdeg {
            return Err(Error::TruncationMismatch(self.maxdeg, other.maxdeg));
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((u, v), c) in &other.terms {
            out.add_term(u.clone(), v.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((u, v), c) in &other.terms {
            out.add_term(u.clone(), v.clone(), c.clone());
        }
        Ok(out)
    }

    /// Componentwise concatenation product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.alpha, self.maxdeg);
        for ((u1, v1), c1) in &self.terms {
            let d1 = u1.degree(&self.alpha) + v1.degree(&self.alpha);
            for ((u2, v2), c2) in &other.terms {
                if d1 + u2.degree(&self.alpha) + v2.degree(&self.alpha) <= self.maxdeg {
                    out.add_term(u1.concat(u2), v1.concat(v2), c1.clone() * c2.clone());
                }
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude; zero for the zero tensor.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// True when `self` equals `x ⊗ 1 + 1 ⊗ x`.
    pub(crate) fn is_primitive_image(&self, x: &Series<C>) -> bool {
        let one = Word::empty();
        self.terms.iter().all(|((u, v), c)| {
            if u.is_empty() {
                *c == x.coeff(v)
            } else if v.is_empty() {
                *c == x.coeff(u)
            } else {
                false
            }
        }) && x
            .terms()
            .keys()
            .all(|w| w.is_empty() || self.terms.contains_key(&(w.clone(), one.clone())))
    }
}
