use std::collections::BTreeMap;
use std::sync::Arc;

use super::alphabet::Alphabet;
use super::series::Series;
use super::word::Word;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lyndon words on `k` letters of length at most `max_len`, in lexicographic order (Duval).
pub fn lyndon_words(k: u16, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<i32> = vec![-1];
    while !w.is_empty() {
        *w.last_mut().unwrap() += 1;
        out.push(Word::from_slice(
            &w.iter().map(|&x| x as u16).collect::<Vec<_>>(),
        ));
        let m = w.len();
        while w.len() < max_len {
            let x = w[w.len() - m];
            w.push(x);
        }
        while let Some(&last) = w.last() {
            if last == k as i32 - 1 {
                w.pop();
            } else {
                break;
            }
        }
    }
    out
}

/// Lyndon words of weighted degree exactly `d`, lexicographically ordered.
pub fn lyndon_basis(alpha: &Alphabet, d: u32) -> Vec<Word> {
    let min_deg = alpha.degrees.iter().copied().min().unwrap_or(1);
    let max_len = (d / min_deg) as usize;
    let mut v: Vec<Word> = lyndon_words(alpha.len() as u16, max_len)
        .into_iter()
        .filter(|w| w.degree(alpha) == d)
        .collect();
    v.sort();
    v
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &Word) -> (Word, Word) {
    let n = w.len();
    for i in 1..n {
        let suffix = &w.0[i..];
        if is_lyndon(suffix) {
            return (Word::from_slice(&w.0[..i]), Word::from_slice(suffix));
        }
    }
    unreachable!("standard factorization requested for a letter")
}

pub fn is_lyndon(w: &[u16]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w[i..] > *w)
}

/// Bracketed Lie polynomial attached to a Lyndon word.
pub fn lyndon_bracket<C: Scalar>(alpha: &Arc<Alphabet>, maxdeg: u32, w: &Word) -> Series<C> {
    let mut memo = BTreeMap::new();
    bracket_memo(alpha, maxdeg, w, &mut memo)
}

fn bracket_memo<C: Scalar>(
    alpha: &Arc<Alphabet>,
    maxdeg: u32,
    w: &Word,
    memo: &mut BTreeMap<Word, Series<C>>,
) -> Series<C> {
    if let Some(s) = memo.get(w) {
        return s.clone();
    }
    let s = if w.len() == 1 {
        Series::letter(alpha, maxdeg, w.0[0])
    } else {
        let (u, v) = standard_factorization(w);
        let pu = bracket_memo(alpha, maxdeg, &u, memo);
        let pv = bracket_memo(alpha, maxdeg, &v, memo);
        pu.bracket(&pv).expect("same alphabet")
    };
    memo.insert(w.clone(), s.clone());
    s
}

/// Lie series in Lyndon coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSeries<C> {
    pub alpha: Arc<Alphabet>,
    pub maxdeg: u32,
    pub coords: BTreeMap<Word, C>,
}

impl<C: Scalar> LieSeries<C> {
    pub fn zero(alpha: &Arc<Alphabet>, maxdeg: u32) -> Self {
        LieSeries {
            alpha: alpha.clone(),
            maxdeg,
            coords: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, w: Word, c: C) {
        if c.is_zero() {
            self.coords.remove(&w);
        } else {
            self.coords.insert(w, c);
        }
    }

    pub fn to_series(&self) -> Series<C> {
        let mut memo = BTreeMap::new();
        let mut out = Series::zero(&self.alpha, self.maxdeg);
        for (w, c) in &self.coords {
            let p = bracket_memo(&self.alpha, self.maxdeg, w, &mut memo);
            out.axpy(c, &p).expect("same alphabet");
        }
        out
    }

    /// Lyndon coordinates of a primitive series; rejects anything outside the Lie span.
    pub fn from_series(x: &Series<C>) -> Result<Self> {
        let alpha = x.alphabet().clone();
        let mut rest = x.clone();
        let mut out = LieSeries::zero(&alpha, x.maxdeg());
        let mut memo = BTreeMap::new();
        for d in 1..=x.maxdeg() {
            let mut comp = rest.component(d);
            if comp.is_zero() {
                continue;
            }
            // The bracket of a Lyndon word is that word plus lexicographically larger words.
            for w in lyndon_basis(&alpha, d) {
                let c = comp.coeff(&w);
                if c.is_zero() {
                    continue;
                }
                let p = bracket_memo(&alpha, x.maxdeg(), &w, &mut memo);
                comp.axpy(&-c.clone(), &p)?;
                rest.axpy(&-c.clone(), &p)?;
                out.coords.insert(w, c);
            }
            if !comp.is_zero() {
                return Err(Error::NotPrimitive(format!(
                    "degree {d} component is not a Lie polynomial"
                )));
            }
        }
        if !rest.is_zero() {
            return Err(Error::NotPrimitive("nonzero constant term".into()));
        }
        Ok(out)
    }
}

/// Witt's necklace count: dimension of the degree-`n` part of the free Lie
/// algebra on `k` degree-one generators.
pub fn witt_dimension(k: u64, n: u32) -> u64 {
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += mobius(d) as i128 * (k as i128).pow(n / d);
        }
    }
    (total / n as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}
