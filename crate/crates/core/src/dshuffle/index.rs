use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, Word};

/// An index `(a_1..a_k; e_1..e_k)` at level `N`, where `e_i` encodes the root
/// of unity `ζ_N^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexPair {
    pub a: Vec<u32>,
    pub e: Vec<u32>,
    pub level: u32,
}

impl IndexPair {
    pub fn new(a: Vec<u32>, e: Vec<i64>, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("level must be positive".into()));
        }
        if a.len() != e.len() {
            return Err(Error::Invalid(format!(
                "index has {} entries but {} roots",
                a.len(),
                e.len()
            )));
        }
        if a.contains(&0) {
            return Err(Error::Invalid("index entries must be positive".into()));
        }
        let e = e.iter().map(|x| x.rem_euclid(level as i64) as u32).collect();
        Ok(IndexPair { a, e, level })
    }

    pub fn empty(level: u32) -> Self {
        IndexPair {
            a: Vec::new(),
            e: Vec::new(),
            level,
        }
    }

    /// `(1, ..., 1; 0, ..., 0)` of depth `m`.
    pub fn ones(m: usize, level: u32) -> Self {
        IndexPair {
            a: vec![1; m],
            e: vec![0; m],
            level,
        }
    }

    pub fn weight(&self) -> u32 {
        self.a.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Admissible unless the last entry is `(1; 0)`.
    pub fn is_admissible(&self) -> bool {
        !matches!((self.a.last(), self.e.last()), (Some(1), Some(0)))
    }

    /// Number of trailing `(1; 0)` entries.
    pub fn trailing_ones(&self) -> usize {
        self.a
            .iter()
            .zip(&self.e)
            .rev()
            .take_while(|&(&a, &e)| a == 1 && e == 0)
            .count()
    }

    /// Splits off the trailing `(1; 0)` entries.
    pub fn split_trailing_ones(&self) -> (IndexPair, usize) {
        let t = self.trailing_ones();
        let k = self.depth() - t;
        (
            IndexPair {
                a: self.a[..k].to_vec(),
                e: self.e[..k].to_vec(),
                level: self.level,
            },
            t,
        )
    }

    pub fn concat(&self, other: &IndexPair) -> Result<IndexPair> {
        same_level(self, other)?;
        let mut out = self.clone();
        out.a.extend(&other.a);
        out.e.extend(&other.e);
        Ok(out)
    }

    /// The word `A^{a_k-1} B(-e_k) A^{a_{k-1}-1} B(-e_k-e_{k-1}) ... A^{a_1-1} B(-e_k-...-e_1)`
    /// whose coefficient (times `(-1)^k`) is the `l`-value of the index.
    pub fn coefficient_word(&self, alpha: &Alphabet) -> Result<Word> {
        if alpha.level != self.level || alpha.letter("A").is_none() {
            return Err(Error::LevelMismatch(alpha.level, self.level));
        }
        let mut w = Word::empty();
        let mut acc = 0i64;
        for i in (0..self.depth()).rev() {
            acc += self.e[i] as i64;
            for _ in 1..self.a[i] {
                w.0.push(0);
            }
            w.0.push(alpha.b(-acc));
        }
        Ok(w)
    }

    /// The Y-word `Y_{a_k,e_k} ... Y_{a_1,e_1}`.
    pub fn y_word(&self, alpha: &Alphabet) -> Option<Word> {
        let mut w = Word::empty();
        for i in (0..self.depth()).rev() {
            w.0.push(alpha.y_letter(self.a[i], self.e[i] as i64)?);
        }
        Some(w)
    }

    /// Every index at this level with weight exactly `w`.
    pub fn all_of_weight(w: u32, level: u32) -> Vec<IndexPair> {
        let mut out = Vec::new();
        for a in compositions(w) {
            let k = a.len();
            let total = (level as usize).pow(k as u32);
            for code in 0..total {
                let mut c = code;
                let e = (0..k)
                    .map(|_| {
                        let r = c % level as usize;
                        c /= level as usize;
                        r as u32
                    })
                    .collect();
                out.push(IndexPair {
                    a: a.clone(),
                    e,
                    level,
                });
            }
        }
        out
    }
}

fn compositions(w: u32) -> Vec<Vec<u32>> {
    if w == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=w {
        for mut rest in compositions(w - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn same_level(p: &IndexPair, q: &IndexPair) -> Result<()> {
    if p.level != q.level {
        return Err(Error::LevelMismatch(p.level, q.level));
    }
    Ok(())
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{};{}@{}", join(&self.a), join(&self.e), self.level)
    }
}

/// Parses `a1,...,ak;e1,...,ek@N`.
impl FromStr for IndexPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let loc = format!("index {s:?}");
        let (body, level) = s
            .trim()
            .rsplit_once('@')
            .ok_or_else(|| Error::parse(&loc, "missing '@N'"))?;
        let level: u32 = level
            .trim()
            .parse()
            .map_err(|_| Error::parse(&loc, "level is not a positive integer"))?;
        let (a, e) = body
            .split_once(';')
            .ok_or_else(|| Error::parse(&loc, "missing ';' between entries and roots"))?;
        let list = |t: &str, what: &str| -> Result<Vec<i64>> {
            let t = t.trim();
            if t.is_empty() {
                return Ok(Vec::new());
            }
            t.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::parse(&loc, format!("bad {what} {x:?}")))
                })
                .collect()
        };
        let a = list(a, "entry")?;
        if a.iter().any(|&x| x <= 0) {
            return Err(Error::parse(&loc, "entries must be positive"));
        }
        let e = list(e, "root exponent")?;
        IndexPair::new(a.into_iter().map(|x| x as u32).collect(), e, level)
            .map_err(|err| Error::parse(&loc, err.to_string()))
    }
}

/// All `σ` in `Sh^≤(k, l)`: onto maps `{0..k+l} → {0..M}`, increasing on the
/// first `k` and on the last `l` points.
pub fn enumerate_sh_leq(k: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut sigma = vec![0; k + l];
    fn go(i: usize, j: usize, slot: usize, k: usize, l: usize, sigma: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == k && j == l {
            out.push(sigma.clone());
            return;
        }
        if i < k {
            sigma[i] = slot;
            go(i + 1, j, slot + 1, k, l, sigma, out);
        }
        if j < l {
            sigma[k + j] = slot;
            go(i, j + 1, slot + 1, k, l, sigma, out);
        }
        if i < k && j < l {
            sigma[i] = slot;
            sigma[k + j] = slot;
            go(i + 1, j + 1, slot + 1, k, l, sigma, out);
        }
    }
    go(0, 0, 0, k, l, &mut sigma, &mut out);
    out
}

/// The indices `σ(p, q)` for `σ ∈ Sh^≤`; merged slots add entries and multiply roots.
pub fn stuffle_indices(p: &IndexPair, q: &IndexPair) -> Result<Vec<IndexPair>> {
    same_level(p, q)?;
    let (k, l) = (p.depth(), q.depth());
    let n = p.level;
    Ok(enumerate_sh_leq(k, l)
        .into_iter()
        .map(|sigma| {
            let m = sigma.iter().copied().max().map_or(0, |x| x + 1);
            let mut a = vec![0u32; m];
            let mut e = vec![0u32; m];
            for (s, &slot) in sigma.iter().enumerate() {
                let (x, r) = if s < k { (p.a[s], p.e[s]) } else { (q.a[s - k], q.e[s - k]) };
                a[slot] += x;
                e[slot] = (e[slot] + r) % n;
            }
            IndexPair { a, e, level: n }
        })
        .collect())
}
