use std::collections::HashMap;

use num_traits::{One, Zero};

use super::index::{stuffle_indices, IndexPair};
use super::tpoly::TPoly;
use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, Series, Word};
use crate::scalar::{factorial, q, qi, Scalar, Q};

fn check_level<C: Scalar>(h: &Series<C>, p: &IndexPair) -> Result<()> {
    let level = h.alphabet().level;
    if h.alphabet() != &Alphabet::cyclotomic(level) {
        return Err(Error::AlphabetMismatch(
            Alphabet::cyclotomic(level).to_string(),
            h.alphabet().to_string(),
        ));
    }
    if p.level != level {
        return Err(Error::LevelMismatch(level, p.level));
    }
    if p.weight() > h.maxdeg() {
        return Err(Error::DegreeOverflow(p.weight(), h.maxdeg()));
    }
    Ok(())
}

fn sign<C: Scalar>(k: usize, c: C) -> C {
    if k % 2 == 1 {
        -c
    } else {
        c
    }
}

/// `l^ζ_a(h) = (-1)^k c_{A^{a_k-1}B(-e_k) ... A^{a_1-1}B(-e_k-...-e_1)}(h)`.
pub fn l_coeff<C: Scalar>(h: &Series<C>, p: &IndexPair) -> Result<C> {
    check_level(h, p)?;
    let w = p.coefficient_word(h.alphabet())?;
    Ok(sign(p.depth(), h.coeff(&w)))
}

/// `l_p(h) l_q(h) − Σ_σ l_{σ(p,q)}(h)`; zero for admissible `p, q` when the
/// series shuffle formula holds.
pub fn stuffle_defect<C: Scalar>(h: &Series<C>, p: &IndexPair, q: &IndexPair) -> Result<C> {
    let mut d = l_coeff(h, p)? * l_coeff(h, q)?;
    for r in stuffle_indices(p, q)? {
        d = d - l_coeff(h, &r)?;
    }
    Ok(d)
}

/// Integral regularization `l^{ζ,I}_a(h) = l^ζ_a(e^{T B(0)} h)`.
pub fn l_i(h: &Series, p: &IndexPair) -> Result<TPoly> {
    check_level(h, p)?;
    let w = p.coefficient_word(h.alphabet())?;
    let b0 = h.alphabet().b(0);
    let mut out = TPoly::zero();
    for n in 0..=w.len() {
        if n > 0 && w.letters()[n - 1] != b0 {
            break;
        }
        let rest = Word::from_slice(&w.letters()[n..]);
        let c = sign(p.depth(), h.coeff(&rest)) / factorial(n as u32);
        out = &out + &TPoly::monomial(n, c);
    }
    Ok(out)
}

/// Series regularization: the unique extension of `l_coeff` from admissible
/// indices with `l^{1,S}_1 = -T` that keeps every stuffle formula valid.
///
/// Non-admissible values are found by a triangular elimination over
/// (weight, number of trailing `(1;0)` entries).
pub struct SeriesRegularization<'a> {
    h: &'a Series,
    memo: HashMap<IndexPair, TPoly>,
}

impl<'a> SeriesRegularization<'a> {
    pub fn new(h: &'a Series) -> Result<Self> {
        let b0 = Word::single(h.alphabet().b(0));
        if !h.coeff(&b0).is_zero() {
            return Err(Error::Precondition("c_B(0)(h) must vanish".into()));
        }
        Ok(SeriesRegularization {
            h,
            memo: HashMap::new(),
        })
    }

    pub fn value(&mut self, p: &IndexPair) -> Result<TPoly> {
        if let Some(v) = self.memo.get(p) {
            return Ok(v.clone());
        }
        let v = self.compute(p)?;
        self.memo.insert(p.clone(), v.clone());
        Ok(v)
    }

    fn compute(&mut self, p: &IndexPair) -> Result<TPoly> {
        if p.is_admissible() {
            return Ok(TPoly::constant(l_coeff(self.h, p)?));
        }
        let (prefix, t) = p.split_trailing_ones();
        let level = p.level;
        let (left, right) = if prefix.is_empty() {
            if t == 1 {
                return Ok(-&TPoly::t());
            }
            (IndexPair::ones(1, level), IndexPair::ones(t - 1, level))
        } else {
            (prefix, IndexPair::ones(t, level))
        };
        let mut rhs = &self.value(&left)? * &self.value(&right)?;
        let mut multiplicity = 0i64;
        for r in stuffle_indices(&left, &right)? {
            if &r == p {
                multiplicity += 1;
            } else {
                rhs = &rhs - &self.value(&r)?;
            }
        }
        debug_assert!(multiplicity > 0);
        Ok(rhs.scale(&q(1, multiplicity)))
    }
}

/// Convenience wrapper around [`SeriesRegularization`].
pub fn l_s(h: &Series, p: &IndexPair) -> Result<TPoly> {
    SeriesRegularization::new(h)?.value(p)
}

/// The linear map `𝕃` on `Q[T]` with
/// `Σ 𝕃(T^n) u^n/n! = exp(T u − Σ_{n>=2} l^1_n(h) u^n/n)`.
#[derive(Clone, Debug)]
pub struct LMap {
    images: Vec<TPoly>,
}

impl LMap {
    /// Images of `T^0..=T^maxn`; needs `h` up to weight `maxn`.
    pub fn new(h: &Series, maxn: u32) -> Result<Self> {
        let level = h.alphabet().level;
        let al = h.alphabet();
        if !h.coeff(&Word::single(0)).is_zero() || !h.coeff(&Word::single(al.b(0))).is_zero() {
            return Err(Error::Precondition("c_A(h) and c_B(0)(h) must vanish".into()));
        }
        // F(u) = T u − Σ_{n>=2} l^1_n u^n / n.
        let mut f = vec![TPoly::zero(), TPoly::t()];
        for n in 2..=maxn {
            let ln = l_coeff(h, &IndexPair::new(vec![n], vec![0], level)?)?;
            f.push(TPoly::constant(-ln / qi(n as i64)));
        }
        // E = exp F via n E_n = Σ_{k=1}^n k F_k E_{n−k}.
        let mut e = vec![TPoly::constant(Q::one())];
        for n in 1..=maxn as usize {
            let mut acc = TPoly::zero();
            for k in 1..=n.min(f.len() - 1) {
                acc = &acc + &(&f[k] * &e[n - k]).scale(&qi(k as i64));
            }
            e.push(acc.scale(&q(1, n as i64)));
        }
        let images = e
            .into_iter()
            .enumerate()
            .map(|(n, x)| x.scale(&factorial(n as u32)))
            .collect();
        Ok(LMap { images })
    }

    pub fn image_of_power(&self, n: usize) -> Option<&TPoly> {
        self.images.get(n)
    }

    pub fn apply(&self, x: &TPoly) -> Result<TPoly> {
        let mut out = TPoly::zero();
        for (n, c) in x.coeffs().iter().enumerate() {
            let img = self
                .images
                .get(n)
                .ok_or_else(|| Error::DegreeOverflow(n as u32, self.images.len() as u32 - 1))?;
            out = &out + &img.scale(c);
        }
        Ok(out)
    }
}

/// Both sides of the regularization relation `l^S = 𝕃(l^I)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularizationCheck {
    pub series: TPoly,
    pub integral_mapped: TPoly,
}

impl RegularizationCheck {
    pub fn holds(&self) -> bool {
        self.series == self.integral_mapped
    }
}

pub fn regularization_check(h: &Series, p: &IndexPair) -> Result<RegularizationCheck> {
    let lmap = LMap::new(h, p.weight())?;
    Ok(RegularizationCheck {
        series: l_s(h, p)?,
        integral_mapped: lmap.apply(&l_i(h, p)?)?,
    })
}

/// One of the normalization equations, evaluated on `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationCheck {
    pub name: String,
    pub lhs: Q,
    pub rhs: Q,
}

impl NormalizationCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The normalization equations of `DMR_{(a,μ)}(N)`: the ratio conditions
/// (only for `N >= 3`, where `N − 2 ≠ 0`) and the `μ` normalization.
pub fn check_dmr_normalizations(h: &Series, a: i64, mu: &Q) -> Result<Vec<NormalizationCheck>> {
    let al = h.alphabet().clone();
    let n = al.level as i64;
    if h.alphabet() != &Alphabet::cyclotomic(al.level) {
        return Err(Error::AlphabetMismatch(
            Alphabet::cyclotomic(al.level).to_string(),
            al.to_string(),
        ));
    }
    let c = |k: i64| h.coeff(&Word::single(al.b(k)));
    let diff = |k: i64| c(k * a) - c(-k * a);
    let mut out = Vec::new();
    if n >= 3 {
        for k in 1..=n / 2 {
            out.push(NormalizationCheck {
                name: format!("ratio k={k}"),
                lhs: diff(k),
                rhs: q(n - 2 * k, n - 2) * diff(1),
            });
        }
        out.push(NormalizationCheck {
            name: "mu".into(),
            lhs: diff(1),
            rhs: -q(n - 2, 2 * n) * mu,
        });
    } else {
        let w = Word::from_slice(&[0, al.b(0)]);
        out.push(NormalizationCheck {
            name: "mu".into(),
            lhs: h.coeff(&w),
            rhs: mu * mu / qi(24),
        });
    }
    Ok(out)
}
