use std::fmt;

use smallvec::SmallVec;

use super::alphabet::Alphabet;

/// Letter sequence, leftmost first. Ordered lexicographically by letter index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub SmallVec<[u16; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_slice(letters: &[u16]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn single(l: u16) -> Self {
        Word::from_slice(&[l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self, alpha: &Alphabet) -> u32 {
        self.0.iter().map(|&l| alpha.degree(l)).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn display<'a>(&'a self, alpha: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alpha }
    }

    pub fn names(&self, alpha: &Alphabet) -> Vec<String> {
        self.0.iter().map(|&l| alpha.name(l).to_string()).collect()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alpha: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let names: Vec<&str> = self.word.0.iter().map(|&l| self.alpha.name(l)).collect();
        write!(f, "{}", names.join("·"))
    }
}

/// All shuffles of two words with multiplicity (each interleaving listed once).
pub fn shuffles(a: &[u16], b: &[u16]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(a.len() + b.len());
    fn rec(a: &[u16], b: &[u16], buf: &mut Vec<u16>, out: &mut Vec<Word>) {
        if a.is_empty() || b.is_empty() {
            let mut w = buf.clone();
            w.extend_from_slice(a);
            w.extend_from_slice(b);
            out.push(Word::from_slice(&w));
            return;
        }
        buf.push(a[0]);
        rec(&a[1..], b, buf, out);
        buf.pop();
        buf.push(b[0]);
        rec(a, &b[1..], buf, out);
        buf.pop();
    }
    rec(a, b, &mut buf, &mut out);
    out
}
