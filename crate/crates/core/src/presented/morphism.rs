use std::sync::Arc;

use super::presentation::Presentation;
use super::quotient::QuotientAlgebra;
use crate::error::{Error, Result};
use crate::ncseries::Series;
use crate::scalar::qi;

/// Which of the three generator-image formulas to use for `x ↦ x^f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XfVariant {
    /// `t_n → t_m`.
    TToT,
    /// `t_{n,N} → t_{m,N}`, requires `f(1) = 1`.
    TnToTn,
    /// `t_n → t_{m,N}` for a map defined on `{2, ..., m}`.
    TToTn,
}

/// Algebra morphism between presented algebras, given on generators.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    /// Image of each source letter: a degree-one element of the target free lift.
    pub images: Vec<Series>,
}

/// `(i, j, a)` encoded in a braid letter name (`t1j`, `tij`, `tij(a)`).
pub fn braid_indices(name: &str) -> Option<(u32, u32, i64)> {
    let rest = name.strip_prefix('t')?;
    let mut chars = rest.chars();
    let i = chars.next()?.to_digit(10)?;
    let j = chars.next()?.to_digit(10)?;
    let tail: String = chars.collect();
    let a = if tail.is_empty() {
        0
    } else {
        tail.strip_prefix('(')?.strip_suffix(')')?.parse().ok()?
    };
    Some((i, j, a))
}

impl Morphism {
    pub fn new(source: Arc<Presentation>, target: Arc<Presentation>, images: Vec<Series>) -> Result<Self> {
        if images.len() != source.alpha.len() {
            return Err(Error::Invalid(format!(
                "{} images for {} generators",
                images.len(),
                source.alpha.len()
            )));
        }
        for (l, im) in images.iter().enumerate() {
            if im.alphabet() != &target.alpha {
                return Err(Error::AlphabetMismatch(
                    target.alpha.to_string(),
                    im.alphabet().to_string(),
                ));
            }
            if let Some(w) = im.terms().keys().find(|w| w.len() != 1) {
                return Err(Error::DegreeMismatch {
                    letter: source.alpha.name(l as u16).to_string(),
                    expected: 1,
                    got: w.len() as u32,
                });
            }
        }
        let images = images.into_iter().map(|s| s.with_maxdeg(1)).collect();
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    pub fn identity(p: Arc<Presentation>) -> Self {
        let images = (0..p.alpha.len() as u16)
            .map(|l| Series::letter(&p.alpha, 1, l))
            .collect();
        Morphism {
            source: p.clone(),
            target: p,
            images,
        }
    }

    /// Applies the morphism to an element of the source free lift.
    pub fn apply(&self, x: &Series) -> Result<Series> {
        let imgs: Vec<Option<Series>> = self
            .images
            .iter()
            .map(|s| Some(s.with_maxdeg(x.maxdeg())))
            .collect();
        if x.is_zero() {
            return Ok(Series::zero(&self.target.alpha, x.maxdeg()));
        }
        x.substitute(&imgs)
    }

    /// Whether every source relation maps into the target ideal.
    pub fn check(&self) -> Result<bool> {
        let quot = QuotientAlgebra::new(self.target.clone(), 2)?;
        for r in &self.source.relations {
            if !quot.is_zero(&self.apply(r)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `x ↦ x^f` for a partially defined `f`, given as `f[k-1] = f(k)`.
    pub fn build_xf(
        f: &[Option<u32>],
        variant: XfVariant,
        source: Arc<Presentation>,
        target: Arc<Presentation>,
    ) -> Result<Self> {
        let (n, m) = match (source.n(), target.n()) {
            (Some(n), Some(m)) => (n, m),
            _ => return Err(Error::Invalid("x^f needs braid presentations".into())),
        };
        if f.len() != m as usize {
            return Err(Error::Invalid(format!("map defined on {} points, target has m = {m}", f.len())));
        }
        if let Some(bad) = f.iter().flatten().find(|&&v| v == 0 || v > n) {
            return Err(Error::Invalid(format!("value {bad} outside 1..={n}")));
        }
        let source_ok = match variant {
            XfVariant::TToT | XfVariant::TToTn => source.is_plain(),
            XfVariant::TnToTn => !source.is_plain(),
        };
        let target_ok = match variant {
            XfVariant::TToT => target.is_plain(),
            XfVariant::TnToTn | XfVariant::TToTn => !target.is_plain(),
        };
        if !source_ok || !target_ok {
            return Err(Error::Invalid(format!(
                "variant {variant:?} does not apply to {} → {}",
                source.tag, target.tag
            )));
        }
        match variant {
            XfVariant::TnToTn if f[0] != Some(1) => {
                return Err(Error::Precondition("f(1) must be 1".into()))
            }
            XfVariant::TnToTn if source.level() != target.level() => {
                return Err(Error::LevelMismatch(source.level(), target.level()))
            }
            XfVariant::TToTn if f[0].is_some() => {
                return Err(Error::Precondition("the map must be undefined at 1".into()))
            }
            _ => {}
        }
        let preimage = |i: u32| -> Vec<u32> {
            (1..=m).filter(|&k| f[k as usize - 1] == Some(i)).collect()
        };
        let level = target.level() as i64;
        let zero = || Series::zero(&target.alpha, 1);
        let mut images = Vec::new();
        for l in 0..source.alpha.len() as u16 {
            let (i, j, a) = braid_indices(source.alpha.name(l))
                .ok_or_else(|| Error::Invalid("unexpected source letter".into()))?;
            let mut img = zero();
            match variant {
                XfVariant::TToT | XfVariant::TToTn => {
                    let a0 = if variant == XfVariant::TToTn { 0 } else { a };
                    for &ip in &preimage(i) {
                        for &jp in &preimage(j) {
                            img = img.add(&target.generator(ip, jp, a0)?)?;
                        }
                    }
                }
                XfVariant::TnToTn if i != 1 => {
                    for &ip in &preimage(i) {
                        for &jp in &preimage(j) {
                            img = img.add(&target.generator(ip, jp, a)?)?;
                        }
                    }
                }
                XfVariant::TnToTn => {
                    let fj = preimage(j);
                    for &jp in &fj {
                        img = img.add(&target.generator(1, jp, 0)?)?;
                    }
                    // Half the ordered-pair sum equals the unordered-pair sum.
                    for (x, &jp) in fj.iter().enumerate() {
                        for &jpp in &fj[x + 1..] {
                            img = img.add(&target.generator_sum(jp, jpp)?)?;
                        }
                    }
                    for &ip in preimage(1).iter().filter(|&&v| v != 1) {
                        for &jp in &fj {
                            for c in 0..level {
                                img = img.add(&target.generator(ip, jp, c)?)?;
                            }
                        }
                    }
                }
            }
            images.push(img);
        }
        Morphism::new(source, target, images)
    }

    /// Level-lowering projection `π_{NN'}`: `t^{1i} ↦ d·t^{1i}`, `t(a) ↦ t(a mod N')`.
    pub fn pi_nn(source: Arc<Presentation>, target: Arc<Presentation>) -> Result<Self> {
        Self::level_map(source, target, true)
    }

    /// `δ_{NN'}`: `t^{1i} ↦ t^{1i}`, `t(a) ↦ t(a/d)` when `d | a`, else 0.
    pub fn delta_nn(source: Arc<Presentation>, target: Arc<Presentation>) -> Result<Self> {
        Self::level_map(source, target, false)
    }

    fn level_map(source: Arc<Presentation>, target: Arc<Presentation>, pi: bool) -> Result<Self> {
        let (nn, np) = (source.level(), target.level());
        if source.n() != target.n() || source.is_reduced() != target.is_reduced() {
            return Err(Error::Invalid("source and target must have the same shape".into()));
        }
        if np == 0 || nn % np != 0 {
            return Err(Error::LevelMismatch(nn, np));
        }
        let d = (nn / np) as i64;
        let mut images = Vec::new();
        for l in 0..source.alpha.len() as u16 {
            let (i, j, a) = braid_indices(source.alpha.name(l))
                .ok_or_else(|| Error::Invalid("unexpected source letter".into()))?;
            let img = if i == 1 {
                let g = target.generator(1, j, 0)?;
                if pi {
                    g.scale(&qi(d))
                } else {
                    g
                }
            } else if pi {
                target.generator(i, j, a)?
            } else if a % d == 0 {
                target.generator(i, j, a / d)?
            } else {
                Series::zero(&target.alpha, 1)
            };
            images.push(img);
        }
        Morphism::new(source, target, images)
    }
}
