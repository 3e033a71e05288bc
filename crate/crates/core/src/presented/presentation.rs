use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, AlphabetKind, Series, Word};
use crate::scalar::{qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentationTag {
    /// Infinitesimal pure braids `t_n`.
    T { n: u32 },
    /// `t_n` modulo its central element.
    T0 { n: u32 },
    /// Cyclotomic variant `t_{n,N}`.
    TN { n: u32, level: u32 },
    /// `t_{n,N}` modulo its central element.
    T0N { n: u32, level: u32 },
    Custom(String),
}

impl fmt::Display for PresentationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationTag::T { n } => write!(f, "t_{n}"),
            PresentationTag::T0 { n } => write!(f, "t0_{n}"),
            PresentationTag::TN { n, level } => write!(f, "t_{{{n},{level}}}"),
            PresentationTag::T0N { n, level } => write!(f, "t0_{{{n},{level}}}"),
            PresentationTag::Custom(s) => write!(f, "custom:{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct BraidShape {
    n: u32,
    level: u32,
    plain: bool,
    reduced: bool,
}

/// Homogeneous quadratic presentation of a graded algebra.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub tag: PresentationTag,
    pub alpha: Arc<Alphabet>,
    /// Degree-two relations in the free algebra on `alpha`.
    pub relations: Vec<Series>,
    shape: Option<BraidShape>,
    hash: String,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash
    }
}

fn name_1j(j: u32) -> String {
    format!("t1{j}")
}

fn name_ij(i: u32, j: u32, a: Option<u32>) -> String {
    match a {
        Some(a) => format!("t{i}{j}({a})"),
        None => format!("t{i}{j}"),
    }
}

impl Presentation {
    pub fn custom(name: &str, alpha: Arc<Alphabet>, relations: Vec<Series>) -> Result<Self> {
        for r in &relations {
            if r.alphabet() != &alpha {
                return Err(Error::AlphabetMismatch(alpha.to_string(), r.alphabet().to_string()));
            }
            if r.terms().keys().any(|w| w.degree(&alpha) != 2) {
                return Err(Error::Invalid("relations must be homogeneous of degree 2".into()));
            }
        }
        if !alpha.all_degree_one() {
            return Err(Error::Invalid("generators must have degree 1".into()));
        }
        Ok(Self::assemble(PresentationTag::Custom(name.into()), alpha, relations, None))
    }

    /// Free algebra on the given alphabet.
    pub fn free(alpha: Arc<Alphabet>) -> Self {
        let name = alpha.to_string();
        Self::assemble(PresentationTag::Custom(name), alpha, Vec::new(), None)
    }

    pub fn build_t(n: u32, level: u32) -> Result<Self> {
        Self::braid(n, level, false, false)
    }

    pub fn build_t0(n: u32, level: u32) -> Result<Self> {
        Self::braid(n, level, false, true)
    }

    pub fn build_t_plain(n: u32) -> Result<Self> {
        Self::braid(n, 1, true, false)
    }

    pub fn build_t0_plain(n: u32) -> Result<Self> {
        Self::braid(n, 1, true, true)
    }

    fn braid(n: u32, level: u32, plain: bool, reduced: bool) -> Result<Self> {
        if !(2..=9).contains(&n) {
            return Err(Error::Invalid(format!("n = {n} outside 2..=9")));
        }
        if level == 0 {
            return Err(Error::Invalid("N must be at least 1".into()));
        }
        if reduced && n < 3 {
            return Err(Error::Invalid("the reduced algebra needs n >= 3".into()));
        }
        let shape = BraidShape {
            n,
            level,
            plain,
            reduced,
        };
        let mut letters = Vec::new();
        let last_1j = if reduced { n - 1 } else { n };
        for j in 2..=last_1j {
            letters.push(name_1j(j));
        }
        for i in 2..=n {
            for j in i + 1..=n {
                if plain {
                    letters.push(name_ij(i, j, None));
                } else {
                    for a in 0..level {
                        letters.push(name_ij(i, j, Some(a)));
                    }
                }
            }
        }
        let degrees = vec![1; letters.len()];
        let alpha = Alphabet::new(AlphabetKind::BraidLift, level, letters, degrees)?;
        let tag = match (plain, reduced) {
            (true, false) => PresentationTag::T { n },
            (true, true) => PresentationTag::T0 { n },
            (false, false) => PresentationTag::TN { n, level },
            (false, true) => PresentationTag::T0N { n, level },
        };
        let mut p = Self::assemble(tag, alpha, Vec::new(), Some(shape));
        p.relations = p.braid_relations()?;
        p.hash = Self::digest(&p.tag, &p.alpha, &p.relations);
        Ok(p)
    }

    fn assemble(
        tag: PresentationTag,
        alpha: Arc<Alphabet>,
        relations: Vec<Series>,
        shape: Option<BraidShape>,
    ) -> Self {
        let hash = Self::digest(&tag, &alpha, &relations);
        Presentation {
            tag,
            alpha,
            relations,
            shape,
            hash,
        }
    }

    fn digest(tag: &PresentationTag, alpha: &Alphabet, relations: &[Series]) -> String {
        let mut h = Sha256::new();
        h.update(tag.to_string().as_bytes());
        h.update(alpha.letters.join(",").as_bytes());
        for r in relations {
            h.update(b"|");
            for (w, c) in r.deglex_terms() {
                h.update(format!("{:?}:{};", w.letters(), c).as_bytes());
            }
        }
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Hex digest identifying the presentation (used as a cache key).
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn n(&self) -> Option<u32> {
        self.shape.map(|s| s.n)
    }

    pub fn level(&self) -> u32 {
        self.shape.map(|s| s.level).unwrap_or(1)
    }

    pub fn is_reduced(&self) -> bool {
        self.shape.map(|s| s.reduced).unwrap_or(false)
    }

    pub fn is_braid(&self) -> bool {
        self.shape.is_some()
    }

    pub fn is_plain(&self) -> bool {
        self.shape.map(|s| s.plain).unwrap_or(false)
    }

    /// Letter of the free lift, by name.
    pub fn letter(&self, name: &str) -> Result<Series> {
        Series::named(&self.alpha, 1, name)
    }

    /// Degree-one element `t(a)^{ij}` (or `t^{1j}` when one index is 1; `a`
    /// is then ignored). Indices may come in either order. In the reduced
    /// algebra `t^{1n}` is rewritten through the vanishing central element.
    pub fn generator(&self, i: u32, j: u32, a: i64) -> Result<Series> {
        let s = self
            .shape
            .ok_or_else(|| Error::Invalid("generator() needs a braid presentation".into()))?;
        if i == j || i == 0 || j == 0 || i > s.n || j > s.n {
            return Err(Error::Invalid(format!("no generator t{i}{j} in n = {}", s.n)));
        }
        let lvl = s.level as i64;
        if i == 1 || j == 1 {
            let k = i.max(j);
            if s.reduced && k == s.n {
                return Ok(self.central_element_full().neg());
            }
            return self.letter(&name_1j(k));
        }
        let (i, j, a) = if i < j { (i, j, a) } else { (j, i, -a) };
        let a = a.rem_euclid(lvl) as u32;
        if s.plain {
            self.letter(&name_ij(i, j, None))
        } else {
            self.letter(&name_ij(i, j, Some(a)))
        }
    }

    /// `t^{ij} = Σ_a t(a)^{ij}` for `i, j >= 2`, and `t^{1j}` otherwise.
    pub fn generator_sum(&self, i: u32, j: u32) -> Result<Series> {
        if i == 1 || j == 1 {
            return self.generator(i, j, 0);
        }
        let mut out = Series::zero(&self.alpha, 1);
        for a in 0..self.level() as i64 {
            out = out.add(&self.generator(i, j, a)?)?;
        }
        Ok(out)
    }

    /// Sum of every letter of the free lift; the central element `z` in the
    /// unreduced algebra, excluding `t^{1n}` in the reduced one.
    fn central_element_full(&self) -> Series {
        let mut out = Series::zero(&self.alpha, 1);
        for l in 0..self.alpha.len() as u16 {
            out.add_term(Word::single(l), qi(1));
        }
        out
    }

    /// Central element `z_{n,N}`; identically zero in the reduced algebra.
    pub fn central_element(&self) -> Series {
        if self.is_reduced() {
            Series::zero(&self.alpha, 1)
        } else {
            self.central_element_full()
        }
    }

    fn braid_relations(&self) -> Result<Vec<Series>> {
        let s = self.shape.expect("braid shape");
        let n = s.n;
        let lvl = s.level as i64;
        let t = |i: u32, j: u32, a: i64| self.generator(i, j, a);
        let tsum = |i: u32, j: u32| self.generator_sum(i, j);
        let br = |x: &Series, y: &Series| -> Result<Series> {
            x.with_maxdeg(2).bracket(&y.with_maxdeg(2))
        };
        let mut rels: Vec<Series> = Vec::new();
        let inner: Vec<u32> = (2..=n).collect();
        for &i in &inner {
            for &j in &inner {
                if i == j {
                    continue;
                }
                for &k in &inner {
                    if k == i || k == j {
                        continue;
                    }
                    for a in 0..lvl {
                        for b in 0..lvl {
                            // [t(a)^{ij}, t(a+b)^{ik} + t(b)^{jk}]
                            let rhs = t(i, k, a + b)?.add(&t(j, k, b)?)?;
                            rels.push(br(&t(i, j, a)?, &rhs)?);
                        }
                        // [t^{1i}, t(a)^{jk}]
                        rels.push(br(&t(1, i, 0)?, &t(j, k, a)?)?);
                    }
                    for &l in &inner {
                        if l == i || l == j || l == k {
                            continue;
                        }
                        for a in 0..lvl {
                            for b in 0..lvl {
                                rels.push(br(&t(i, j, a)?, &t(k, l, b)?)?);
                            }
                        }
                    }
                }
                let cluster = t(1, i, 0)?.add(&t(1, j, 0)?)?.add(&tsum(i, j)?)?;
                for a in 0..lvl {
                    rels.push(br(&cluster, &t(i, j, a)?)?);
                }
                rels.push(br(&t(1, i, 0)?, &t(1, j, 0)?.add(&tsum(i, j)?)?)?);
            }
        }
        // Keep one representative per line through the origin.
        let mut out: Vec<Series> = Vec::new();
        for r in rels {
            if r.is_zero() {
                continue;
            }
            let lead = r.terms().values().next().cloned().unwrap();
            let r = r.scale(&(Q::from_integer(1.into()) / lead));
            if !out.contains(&r) {
                out.push(r);
            }
        }
        Ok(out)
    }
}
