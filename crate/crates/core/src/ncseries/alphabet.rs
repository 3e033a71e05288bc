use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphabetKind {
    /// `A`, `B`: the free Lie algebra of rank two.
    F2,
    /// `A`, `B0`, ..., `B{N-1}`: the free Lie algebra of rank `N + 1`.
    Cyclotomic,
    /// `Y{n}_{a}` with weight `n`.
    Y,
    /// Free lift of the generators of an infinitesimal braid algebra.
    BraidLift,
    Custom,
}

/// Ordered, graded set of letters. The declared order is the monomial order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Alphabet {
    pub kind: AlphabetKind,
    pub level: u32,
    pub letters: Vec<String>,
    pub degrees: Vec<u32>,
    #[serde(skip)]
    index: HashMap<String, u16>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.level == other.level
            && self.letters == other.letters
            && self.degrees == other.degrees
    }
}
impl Eq for Alphabet {}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[N={}]{{{}}}", self.kind, self.level, self.letters.join(","))
    }
}

impl Alphabet {
    pub fn new(
        kind: AlphabetKind,
        level: u32,
        letters: Vec<String>,
        degrees: Vec<u32>,
    ) -> Result<Arc<Self>> {
        if letters.len() != degrees.len() {
            return Err(Error::Invalid("letters and degrees differ in length".into()));
        }
        if letters.len() > u16::MAX as usize {
            return Err(Error::Invalid("too many letters".into()));
        }
        if level == 0 {
            return Err(Error::Invalid("level must be at least 1".into()));
        }
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::Invalid(format!("letter {} has degree 0", letters[i])));
        }
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if index.insert(l.clone(), i as u16).is_some() {
                return Err(Error::Invalid(format!("duplicate letter {l}")));
            }
        }
        Ok(Arc::new(Alphabet {
            kind,
            level,
            letters,
            degrees,
            index,
        }))
    }

    /// Rebuilds the lookup table after deserialization and validates.
    pub fn validated(self) -> Result<Arc<Self>> {
        Alphabet::new(self.kind, self.level, self.letters, self.degrees)
    }

    pub fn f2() -> Arc<Self> {
        Alphabet::new(AlphabetKind::F2, 1, vec!["A".into(), "B".into()], vec![1, 1]).unwrap()
    }

    /// `A, B(0), ..., B(N-1)`.
    pub fn cyclotomic(n: u32) -> Arc<Self> {
        let mut letters = vec!["A".to_string()];
        letters.extend((0..n).map(|a| format!("B{a}")));
        let degrees = vec![1; letters.len()];
        Alphabet::new(AlphabetKind::Cyclotomic, n, letters, degrees).unwrap()
    }

    /// `Y_{n,a}` for `1 <= n <= max_weight`, ordered by `(n, a)`.
    pub fn y(n_level: u32, max_weight: u32) -> Arc<Self> {
        let mut letters = Vec::new();
        let mut degrees = Vec::new();
        for n in 1..=max_weight.max(1) {
            for a in 0..n_level {
                letters.push(format!("Y{n}_{a}"));
                degrees.push(n);
            }
        }
        Alphabet::new(AlphabetKind::Y, n_level, letters, degrees).unwrap()
    }

    pub fn custom(letters: &[&str]) -> Arc<Self> {
        Alphabet::new(
            AlphabetKind::Custom,
            1,
            letters.iter().map(|s| s.to_string()).collect(),
            vec![1; letters.len()],
        )
        .unwrap()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, name: &str) -> Option<u16> {
        self.index.get(name).copied()
    }

    pub fn expect_letter(&self, name: &str) -> u16 {
        self.letter(name)
            .unwrap_or_else(|| panic!("letter {name} not in {self}"))
    }

    pub fn name(&self, l: u16) -> &str {
        &self.letters[l as usize]
    }

    pub fn degree(&self, l: u16) -> u32 {
        self.degrees[l as usize]
    }

    pub fn all_degree_one(&self) -> bool {
        self.degrees.iter().all(|&d| d == 1)
    }

    /// Letter `B(a)` of a cyclotomic alphabet, `a` taken mod N.
    pub fn b(&self, a: i64) -> u16 {
        debug_assert_eq!(self.kind, AlphabetKind::Cyclotomic);
        1 + a.rem_euclid(self.level as i64) as u16
    }

    /// Letter `Y_{n,a}` of a Y alphabet.
    pub fn y_letter(&self, n: u32, a: i64) -> Option<u16> {
        debug_assert_eq!(self.kind, AlphabetKind::Y);
        let a = a.rem_euclid(self.level as i64) as u32;
        let idx = (n.checked_sub(1)?) * self.level + a;
        if (idx as usize) < self.letters.len() {
            Some(idx as u16)
        } else {
            None
        }
    }

    /// Inverse of [`Alphabet::y_letter`].
    pub fn y_index(&self, l: u16) -> (u32, u32) {
        (l as u32 / self.level + 1, l as u32 % self.level)
    }
}
