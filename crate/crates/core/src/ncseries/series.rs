use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::alphabet::Alphabet;
use super::word::{shuffles, Word};
use crate::error::{Error, Result};
use crate::scalar::{q, qi, Scalar, Q};

/// Truncated non-commutative power series over a graded alphabet.
///
/// Zero coefficients are never stored and no word of degree above `maxdeg` is kept.
#[derive(Clone, PartialEq)]
pub struct Series<C = Q> {
    alpha: Arc<Alphabet>,
    maxdeg: u32,
    terms: BTreeMap<Word, C>,
}

impl<C: Scalar> Series<C> {
    pub fn zero(alpha: &Arc<Alphabet>, maxdeg: u32) -> Self {
        Series {
            alpha: alpha.clone(),
            maxdeg,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alpha: &Arc<Alphabet>, maxdeg: u32) -> Self {
        Self::monomial(alpha, maxdeg, Word::empty(), C::one())
    }

    pub fn monomial(alpha: &Arc<Alphabet>, maxdeg: u32, w: Word, c: C) -> Self {
        let mut s = Self::zero(alpha, maxdeg);
        s.add_term(w, c);
        s
    }

    /// The series consisting of a single letter.
    pub fn letter(alpha: &Arc<Alphabet>, maxdeg: u32, l: u16) -> Self {
        Self::monomial(alpha, maxdeg, Word::single(l), C::one())
    }

    pub fn named(alpha: &Arc<Alphabet>, maxdeg: u32, name: &str) -> Result<Self> {
        let l = alpha
            .letter(name)
            .ok_or_else(|| Error::Invalid(format!("unknown letter {name}")))?;
        Ok(Self::letter(alpha, maxdeg, l))
    }

    pub fn from_terms(
        alpha: &Arc<Alphabet>,
        maxdeg: u32,
        terms: impl IntoIterator<Item = (Word, C)>,
    ) -> Self {
        let mut s = Self::zero(alpha, maxdeg);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn terms(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·w`, dropping it silently when `w` lies beyond the truncation.
    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() || w.degree(&self.alpha) > self.maxdeg {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the word spelled by letter names; unknown names give an error.
    pub fn coeff_of(&self, names: &[&str]) -> Result<C> {
        let mut w = Word::empty();
        for n in names {
            let l = self
                .alpha
                .letter(n)
                .ok_or_else(|| Error::Invalid(format!("unknown letter {n}")))?;
            w.0.push(l);
        }
        Ok(self.coeff(&w))
    }

    pub fn constant(&self) -> C {
        self.coeff(&Word::empty())
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.alpha, self.maxdeg);
        if c.is_zero() {
            return out;
        }
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    /// In-place `self += c·other`, both sharing alphabet and truncation.
    pub fn axpy(&mut self, c: &C, other: &Self) -> Result<()> {
        self.check(other)?;
        for (w, v) in &other.terms {
            self.add_term(w.clone(), c.clone() * v.clone());
        }
        Ok(())
    }

    fn by_degree(&self) -> Vec<Vec<(&Word, &C)>> {
        let mut buckets = vec![Vec::new(); self.maxdeg as usize + 1];
        for (w, c) in &self.terms {
            buckets[w.degree(&self.alpha) as usize].push((w, c));
        }
        buckets
    }

    pub fn concat_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.alpha, self.maxdeg);
        let left = self.by_degree();
        let right = other.by_degree();
        for (da, la) in left.iter().enumerate() {
            for rb in right.iter().take(self.maxdeg as usize + 1 - da) {
                for (wa, ca) in la {
                    for (wb, cb) in rb {
                        out.add_term(wa.concat(wb), (*ca).clone() * (*cb).clone());
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn shuffle_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.alpha, self.maxdeg);
        let left = self.by_degree();
        let right = other.by_degree();
        for (da, la) in left.iter().enumerate() {
            for rb in right.iter().take(self.maxdeg as usize + 1 - da) {
                for (wa, ca) in la {
                    for (wb, cb) in rb {
                        let c = (*ca).clone() * (*cb).clone();
                        for w in shuffles(wa.letters(), wb.letters()) {
                            out.add_term(w, c.clone());
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] = ab - ba`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.concat_mul(other)?.sub(&other.concat_mul(self)?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.alpha, self.maxdeg);
        for _ in 0..n {
            acc = acc.concat_mul(self).expect("same shape");
        }
        acc
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Self {
        let mut out = Self::zero(&self.alpha, self.maxdeg);
        for (w, c) in &self.terms {
            if w.degree(&self.alpha) == d {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.degree(&self.alpha)).min()
    }

    /// Changes the truncation degree. Raising it is only meaningful when the
    /// caller knows the series is exact (e.g. a polynomial).
    pub fn with_maxdeg(&self, maxdeg: u32) -> Self {
        let mut out = Self::zero(&self.alpha, maxdeg);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.constant().is_zero() {
            return Err(Error::Precondition("exp needs constant term 0".into()));
        }
        let mut out = Self::one(&self.alpha, self.maxdeg);
        let mut power = Self::one(&self.alpha, self.maxdeg);
        for n in 1..=self.maxdeg {
            power = power.concat_mul(self)?;
            if power.is_zero() {
                break;
            }
            power = power.scale(&C::from_q(&(q(1, n as i64))));
            out.axpy(&C::one(), &power)?;
        }
        Ok(out)
    }

    pub fn log(&self) -> Result<Self> {
        if self.constant() != C::one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let y = self.sub(&Self::one(&self.alpha, self.maxdeg))?;
        let mut out = Self::zero(&self.alpha, self.maxdeg);
        let mut power = Self::one(&self.alpha, self.maxdeg);
        for n in 1..=self.maxdeg {
            power = power.concat_mul(&y)?;
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out.axpy(&C::from_q(&(qi(sign) / qi(n as i64))), &power)?;
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires an invertible constant term equal to one.
    pub fn inverse(&self) -> Result<Self> {
        if self.constant() != C::one() {
            return Err(Error::Precondition("inverse needs constant term 1".into()));
        }
        let x = Self::one(&self.alpha, self.maxdeg).sub(self)?;
        let mut out = Self::one(&self.alpha, self.maxdeg);
        let mut power = Self::one(&self.alpha, self.maxdeg);
        for _ in 1..=self.maxdeg {
            power = power.concat_mul(&x)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// Reinterprets letter indices in another alphabet with the same letter degrees.
    pub fn relabel(&self, alpha: &Arc<Alphabet>) -> Result<Self> {
        if alpha.degrees != self.alpha.degrees {
            return Err(Error::AlphabetMismatch(self.alpha.to_string(), alpha.to_string()));
        }
        Ok(Series {
            alpha: alpha.clone(),
            maxdeg: self.maxdeg,
            terms: self.terms.clone(),
        })
    }

    /// Coefficient map into another scalar type.
    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut out = Series::<D>::zero(&self.alpha, self.maxdeg);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Applies the algebra morphism determined by letter images.
    ///
    /// `images[l]` is the image of letter `l`; `None` means a missing image.
    /// The result carries the source truncation.
    pub fn substitute(&self, images: &[Option<Series<C>>]) -> Result<Series<C>> {
        if images.len() != self.alpha.len() {
            return Err(Error::Invalid(format!(
                "expected {} images, got {}",
                self.alpha.len(),
                images.len()
            )));
        }
        let target = match images.iter().flatten().next() {
            Some(s) => s.alpha.clone(),
            None => self.alpha.clone(),
        };
        let mut imgs: Vec<Series<C>> = Vec::with_capacity(images.len());
        for (l, im) in images.iter().enumerate() {
            let name = self.alpha.name(l as u16);
            let im = match im {
                Some(s) => s,
                None if self.terms.keys().any(|w| w.0.contains(&(l as u16))) => {
                    return Err(Error::MissingImage(name.to_string()))
                }
                None => {
                    imgs.push(Series::zero(&target, self.maxdeg));
                    continue;
                }
            };
            if im.alpha != target {
                return Err(Error::AlphabetMismatch(target.to_string(), im.alpha.to_string()));
            }
            if im.maxdeg < self.maxdeg {
                return Err(Error::TruncationMismatch(self.maxdeg, im.maxdeg));
            }
            let expected = self.alpha.degree(l as u16);
            for w in im.terms.keys() {
                let got = w.degree(&target);
                if got != expected {
                    return Err(Error::DegreeMismatch {
                        letter: name.to_string(),
                        expected,
                        got,
                    });
                }
            }
            imgs.push(im.with_maxdeg(self.maxdeg));
        }
        let mut out = Series::zero(&target, self.maxdeg);
        // Words come in lexicographic order, so every proper prefix is met first.
        let mut prefix_cache: BTreeMap<Word, Series<C>> = BTreeMap::new();
        prefix_cache.insert(Word::empty(), Series::one(&target, self.maxdeg));
        for (w, c) in &self.terms {
            let img = image_of(w, &imgs, &mut prefix_cache)?;
            out.axpy(c, &img)?;
        }
        Ok(out)
    }

    /// Checks `g(0) = 1` and `Δg = g ⊗ g`, via primitivity of `log g`.
    pub fn is_grouplike(&self) -> bool {
        if self.constant() != C::one() {
            return false;
        }
        match self.log() {
            Ok(l) => l.is_primitive(),
            Err(_) => false,
        }
    }

    /// Primitive elements are exactly the Lie series; tested degree by degree
    /// through the coproduct of each homogeneous part.
    pub fn is_primitive(&self) -> bool {
        if !self.constant().is_zero() {
            return false;
        }
        super::tensor::Tensor2::coproduct(self).is_primitive_image(self)
    }
}

fn image_of<C: Scalar>(
    w: &Word,
    imgs: &[Series<C>],
    cache: &mut BTreeMap<Word, Series<C>>,
) -> Result<Series<C>> {
    if let Some(s) = cache.get(w) {
        return Ok(s.clone());
    }
    let n = w.len();
    let prefix = Word::from_slice(&w.0[..n - 1]);
    let head = image_of(&prefix, imgs, cache)?;
    let img = head.concat_mul(&imgs[w.0[n - 1] as usize])?;
    cache.insert(w.clone(), img.clone());
    Ok(img)
}

impl<C: Scalar> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(D={}; ", self.maxdeg)?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?}){}", w.display(&self.alpha))?;
        }
        write!(f, ")")
    }
}
