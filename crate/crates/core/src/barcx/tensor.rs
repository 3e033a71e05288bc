use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::forms::{form_alphabet, Space};
use crate::error::{Error, Result};
use crate::ncseries::{shuffles, Alphabet, Word};
use crate::scalar::{format_q, parse_q, Q};

/// Rational combination of bar words `[α_m | ... | α_1]`.
///
/// Letter 0 of a word is the leftmost slot, i.e. the outermost integration
/// (nearest the endpoint of the path).
#[derive(Clone, Debug)]
pub struct BarTensor {
    space: Space,
    alpha: Arc<Alphabet>,
    terms: BTreeMap<Word, Q>,
}

impl PartialEq for BarTensor {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.alpha == other.alpha && self.terms == other.terms
    }
}

impl BarTensor {
    pub fn zero(space: Space, level: u32) -> Result<Self> {
        Ok(BarTensor {
            space,
            alpha: form_alphabet(space, level)?,
            terms: BTreeMap::new(),
        })
    }

    /// The empty word `[]`, the unit for the shuffle product.
    pub fn unit(space: Space, level: u32) -> Result<Self> {
        let mut t = Self::zero(space, level)?;
        t.add_term(Word::empty(), Q::one());
        Ok(t)
    }

    pub fn word(space: Space, level: u32, letters: &[u16]) -> Result<Self> {
        let mut t = Self::zero(space, level)?;
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= t.alpha.len()) {
            return Err(Error::Invalid(format!("letter {bad} out of range for {space}")));
        }
        t.add_term(Word::from_slice(letters), Q::one());
        Ok(t)
    }

    /// A single word given by form symbols, e.g. `["dx@1", "dy"]`.
    pub fn parse_word(space: Space, level: u32, symbols: &[&str]) -> Result<Self> {
        let alpha = form_alphabet(space, level)?;
        let letters = symbols
            .iter()
            .map(|s| {
                alpha
                    .letter(s)
                    .ok_or_else(|| Error::Invalid(format!("{s:?} is not a one-form of {space} at N = {level}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::word(space, level, &letters)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn level(&self) -> u32 {
        self.alpha.level
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
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

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of a word given by symbols; unknown symbols are an error.
    pub fn coeff_of(&self, symbols: &[&str]) -> Result<Q> {
        let mut w = Word::empty();
        for s in symbols {
            let l = self
                .alpha
                .letter(s)
                .ok_or_else(|| Error::Invalid(format!("unknown form {s:?}")))?;
            w.0.push(l);
        }
        Ok(self.coeff(&w))
    }

    /// Longest word length; `None` for the zero tensor.
    pub fn max_length(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.len() as u32).max()
    }

    /// Common length of all words, if there is one.
    pub fn homogeneous_length(&self) -> Option<u32> {
        let mut lens = self.terms.keys().map(|w| w.len() as u32);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space != other.space || self.alpha != other.alpha {
            return Err(Error::AlphabetMismatch(
                format!("{}[N={}]", self.space, self.level()),
                format!("{}[N={}]", other.space, other.level()),
            ));
        }
        Ok(())
    }

    pub fn axpy(&mut self, c: &Q, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (w, v) in &other.terms {
            self.add_term(w.clone(), c * v);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(&Q::one(), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(&-Q::one(), other)?;
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.empty_like();
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect();
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    fn empty_like(&self) -> Self {
        BarTensor {
            space: self.space,
            alpha: self.alpha.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `[ω | b]`: puts the letter `l` in front of every word.
    pub fn prepend(&self, l: u16) -> Self {
        let mut out = self.empty_like();
        for (w, v) in &self.terms {
            let mut nw = Word::single(l);
            nw.0.extend_from_slice(w.letters());
            out.terms.insert(nw, v.clone());
        }
        out
    }

    /// Shuffle product, the product of the bar complex in degree zero.
    pub fn shuffle(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.empty_like();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let c = a * b;
                for w in shuffles(u.letters(), v.letters()) {
                    out.add_term(w, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Deconcatenation coproduct, as pairs `(left, right)` of tensors.
    pub fn deconcatenate(&self) -> Vec<(Self, Self)> {
        let maxlen = self.max_length().unwrap_or(0) as usize;
        let mut out = Vec::new();
        for cut in 0..=maxlen {
            let mut by_left: BTreeMap<Word, Self> = BTreeMap::new();
            for (w, c) in self.terms.iter().filter(|(w, _)| w.len() >= cut) {
                let left = Word::from_slice(&w.letters()[..cut]);
                let right = Word::from_slice(&w.letters()[cut..]);
                by_left
                    .entry(left)
                    .or_insert_with(|| self.empty_like())
                    .add_term(right, c.clone());
            }
            for (left, right) in by_left {
                let mut l = self.empty_like();
                l.add_term(left, Q::one());
                out.push((l, right));
            }
        }
        out
    }

    /// Letterwise linear map into another space: letter `l` goes to the
    /// combination `table[l]` of target letters (an empty list means 0).
    pub fn map_letters(&self, target: Space, level: u32, table: &[Vec<(u16, Q)>]) -> Result<Self> {
        if table.len() != self.alpha.len() {
            return Err(Error::Invalid(format!(
                "letter table has {} rows for {} forms",
                table.len(),
                self.alpha.len()
            )));
        }
        let mut out = Self::zero(target, level)?;
        out.terms = self.map_words(table);
        Ok(out)
    }

    /// Letterwise image of every word, as a bare word map.
    pub(crate) fn map_words(&self, table: &[Vec<(u16, Q)>]) -> BTreeMap<Word, Q> {
        let mut out: BTreeMap<Word, Q> = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut partial: Vec<(Vec<u16>, Q)> = vec![(Vec::new(), c.clone())];
            for &l in w.letters() {
                let row = &table[l as usize];
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (p, pc) in &partial {
                    for (t, tc) in row {
                        let mut np = p.clone();
                        np.push(*t);
                        next.push((np, pc * tc));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for (p, pc) in partial {
                *out.entry(Word::from_slice(&p)).or_insert_with(Q::zero) += pc;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn to_json_value(&self) -> Value {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        let terms: Vec<Value> = terms
            .into_iter()
            .map(|(w, c)| json!({"word": w.names(&self.alpha), "coeff": format_q(c)}))
            .collect();
        json!({"space": self.space.name(), "N": self.level(), "terms": terms})
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let space: Space = v
            .get("space")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("space", "expected a string"))?
            .parse()
            .map_err(|e: Error| Error::parse("space", e.to_string()))?;
        let level = v
            .get("N")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse("N", "expected a positive integer"))? as u32;
        let mut out = Self::zero(space, level)?;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("terms", "expected an array"))?;
        for (i, t) in terms.iter().enumerate() {
            let word = t
                .get("word")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(format!("terms[{i}].word"), "expected an array"))?;
            let mut w = Word::empty();
            for (j, s) in word.iter().enumerate() {
                let loc = format!("terms[{i}].word[{j}]");
                let name = s.as_str().ok_or_else(|| Error::parse(&loc, "expected a string"))?;
                let l = out
                    .alpha
                    .letter(name)
                    .ok_or_else(|| Error::parse(&loc, format!("unknown form {name:?}")))?;
                w.0.push(l);
            }
            let cs = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::parse(format!("terms[{i}].coeff"), "expected a string"))?;
            let c = parse_q(cs).map_err(|e| Error::parse(format!("terms[{i}].coeff"), e.to_string()))?;
            out.add_term(w, c);
        }
        Ok(out)
    }
}

impl fmt::Display for BarTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let body = w.names(&self.alpha).join("|");
            let (sign, mag) = if *c < Q::zero() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "[{body}]")?;
        }
        Ok(())
    }
}
