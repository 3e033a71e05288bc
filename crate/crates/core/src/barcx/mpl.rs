//! Bar elements of one- and two-variable cyclotomic multiple polylogarithms.
//!
//! A function `F` vanishing at the base point with `dF = Σ ωᵢ Gᵢ` corresponds
//! to `l(F) = Σ [ωᵢ | l(Gᵢ)]`, and the constant 1 to the empty word.

use std::collections::HashMap;

use num_traits::One;

use super::forms::{m04, m05, Space};
use super::tensor::BarTensor;
use crate::dshuffle::IndexPair;
use crate::error::{Error, Result};
use crate::scalar::Q;

/// Argument of a one-variable polylogarithm on the five-point space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MplVar {
    X,
    Y,
    XY,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Func {
    /// `Li_a(ζ(z))` on the four-point space.
    Z(Vec<u32>, Vec<u32>),
    /// `Li_a(ζ(v))` with `v ∈ {x, y, xy}`.
    One(Vec<u32>, Vec<u32>, MplVar),
    /// `Li_{a,b}(ζ(x), η(y))`.
    Two(Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>),
}

struct Builder {
    level: u32,
    memo: HashMap<Func, BarTensor>,
}

type Step = (u16, Q, Option<Func>);

impl Builder {
    fn new(level: u32) -> Self {
        Builder {
            level,
            memo: HashMap::new(),
        }
    }

    fn m(&self, x: u32, y: u32) -> u32 {
        (x + y) % self.level
    }

    fn neg(&self, x: u32) -> i64 {
        -(x as i64)
    }

    /// Letters of `dv/v`.
    fn dlog_var(&self, v: MplVar) -> Vec<u16> {
        match v {
            MplVar::X => vec![m05::dx()],
            MplVar::Y => vec![m05::dy(self.level)],
            MplVar::XY => vec![m05::dx(), m05::dy(self.level)],
        }
    }

    /// Letter of `dlog(v − ζ^a)`.
    fn dlog_shift(&self, v: MplVar, a: i64) -> u16 {
        let n = self.level;
        match v {
            MplVar::X => m05::dx_at(n, a),
            MplVar::Y => m05::dy_at(n, a),
            MplVar::XY => m05::dxy_at(n, a),
        }
    }

    /// One-variable step: `a_k ≥ 2` gives `dv/v`; `a_k = 1` gives
    /// `dv/(ζ_k⁻¹ − v) = −dlog(v − ζ_k⁻¹)` with `ζ_k` merged into `ζ_{k−1}`.
    fn one_var_steps(&self, a: &[u32], e: &[u32], dlog: Vec<u16>, shift: u16, wrap: impl Fn(Vec<u32>, Vec<u32>) -> Func) -> Vec<Step> {
        let k = a.len();
        if a[k - 1] >= 2 {
            let mut a2 = a.to_vec();
            a2[k - 1] -= 1;
            let g = wrap(a2, e.to_vec());
            return dlog.into_iter().map(|l| (l, Q::one(), Some(g.clone()))).collect();
        }
        let g = (k > 1).then(|| {
            let mut e2 = e[..k - 1].to_vec();
            e2[k - 2] = self.m(e[k - 2], e[k - 1]);
            wrap(a[..k - 1].to_vec(), e2)
        });
        vec![(shift, -Q::one(), g)]
    }

    fn steps(&self, f: &Func) -> Vec<Step> {
        let n = self.level;
        match f {
            Func::Z(a, e) => {
                let last = *e.last().expect("nonempty");
                let shift = m04::w(n, self.neg(last));
                self.one_var_steps(a, e, vec![m04::w0()], shift, Func::Z)
            }
            Func::One(a, e, v) => {
                let v = *v;
                let last = *e.last().expect("nonempty");
                let shift = self.dlog_shift(v, self.neg(last));
                self.one_var_steps(a, e, self.dlog_var(v), shift, move |a, e| Func::One(a, e, v))
            }
            Func::Two(a, e, b, f) => self.two_var_steps(a, e, b, f),
        }
    }

    fn two_var_steps(&self, a: &[u32], e: &[u32], b: &[u32], f: &[u32]) -> Vec<Step> {
        let n = self.level;
        let (k, l) = (a.len(), b.len());
        let one = Q::one;
        let mut out = Vec::new();
        // d/dx
        if a[k - 1] >= 2 {
            let mut a2 = a.to_vec();
            a2[k - 1] -= 1;
            out.push((m05::dx(), one(), Some(Func::Two(a2, e.to_vec(), b.to_vec(), f.to_vec()))));
        } else {
            let ek = e[k - 1];
            let g1 = if k == 1 {
                Func::One(b.to_vec(), f.to_vec(), MplVar::Y)
            } else {
                let mut e2 = e[..k - 1].to_vec();
                e2[k - 2] = self.m(e[k - 2], ek);
                Func::Two(a[..k - 1].to_vec(), e2, b.to_vec(), f.to_vec())
            };
            let mut a3 = a[..k - 1].to_vec();
            a3.push(b[0]);
            let mut e3 = e[..k - 1].to_vec();
            e3.push(self.m(ek, f[0]));
            let g2 = if l == 1 {
                Func::One(a3, e3, MplVar::XY)
            } else {
                Func::Two(a3, e3, b[1..].to_vec(), f[1..].to_vec())
            };
            let shifted = m05::dx_at(n, self.neg(ek));
            // dx/(ζ_k⁻¹ − x)·G1 − (dx/x + dx/(ζ_k⁻¹ − x))·G2
            out.push((shifted, -one(), Some(g1)));
            out.push((m05::dx(), -one(), Some(g2.clone())));
            out.push((shifted, one(), Some(g2)));
        }
        // d/dy
        if b[l - 1] >= 2 {
            let mut b2 = b.to_vec();
            b2[l - 1] -= 1;
            out.push((m05::dy(n), one(), Some(Func::Two(a.to_vec(), e.to_vec(), b2, f.to_vec()))));
        } else {
            let fl = f[l - 1];
            let g = if l == 1 {
                let mut e2 = e.to_vec();
                e2[k - 1] = self.m(e[k - 1], fl);
                Func::One(a.to_vec(), e2, MplVar::XY)
            } else {
                let mut f2 = f[..l - 1].to_vec();
                f2[l - 2] = self.m(f[l - 2], fl);
                Func::Two(a.to_vec(), e.to_vec(), b[..l - 1].to_vec(), f2)
            };
            out.push((m05::dy_at(n, self.neg(fl)), -one(), Some(g)));
        }
        out
    }

    fn space(f: &Func) -> Space {
        match f {
            Func::Z(..) => Space::M04N,
            _ => Space::M05Nxy,
        }
    }

    fn build(&mut self, f: &Func) -> Result<BarTensor> {
        if let Some(t) = self.memo.get(f) {
            return Ok(t.clone());
        }
        let space = Self::space(f);
        let mut out = BarTensor::zero(space, self.level)?;
        for (letter, c, g) in self.steps(f) {
            let inner = match g {
                Some(g) => self.build(&g)?,
                None => BarTensor::unit(space, self.level)?,
            };
            out.axpy(&c, &inner.prepend(letter))?;
        }
        self.memo.insert(f.clone(), out.clone());
        Ok(out)
    }
}

fn nonempty(p: &IndexPair) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Invalid("index pair must be nonempty".into()));
    }
    Ok(())
}

/// `l^ζ_a = (−1)^k [ω₀^{a_k−1} | ω_{ζ_k⁻¹} | ω₀^{a_{k−1}−1} | ω_{ζ_k⁻¹ζ_{k−1}⁻¹} | ...]`.
pub fn build_l_onevar(p: &IndexPair) -> Result<BarTensor> {
    nonempty(p)?;
    let n = p.level;
    let mut letters = Vec::with_capacity(p.weight() as usize);
    let mut root = 0i64;
    for (&a, &e) in p.a.iter().zip(&p.e).rev() {
        letters.extend(std::iter::repeat_n(m04::w0(), a as usize - 1));
        root -= e as i64;
        letters.push(m04::w(n, root));
    }
    let t = BarTensor::word(Space::M04N, n, &letters)?;
    Ok(if p.depth() % 2 == 1 { t.neg() } else { t })
}

/// The same element obtained from the differential equation of `Li_a(ζ(z))`.
pub fn build_l_onevar_by_recursion(p: &IndexPair) -> Result<BarTensor> {
    nonempty(p)?;
    Builder::new(p.level).build(&Func::Z(p.a.clone(), p.e.clone()))
}

/// `l^{ζ(v)}_a` on the five-point space, `v ∈ {x, y, xy}`.
pub fn build_l_in(p: &IndexPair, v: MplVar) -> Result<BarTensor> {
    if p.is_empty() {
        return BarTensor::unit(Space::M05Nxy, p.level);
    }
    Builder::new(p.level).build(&Func::One(p.a.clone(), p.e.clone(), v))
}

fn same_level(p: &IndexPair, q: &IndexPair) -> Result<()> {
    if p.level != q.level {
        return Err(Error::LevelMismatch(p.level, q.level));
    }
    Ok(())
}

/// `l^{ζ(x),η(y)}_{a,b}`, the bar element of `Li_{a,b}(ζ(x), η(y))`.
pub fn build_l_twovar(p: &IndexPair, q: &IndexPair) -> Result<BarTensor> {
    nonempty(p)?;
    nonempty(q)?;
    same_level(p, q)?;
    Builder::new(p.level).build(&Func::Two(p.a.clone(), p.e.clone(), q.a.clone(), q.e.clone()))
}

/// `l^{η(y),ζ(x)}_{b,a}`: the first block carries `y`, the second `x`.
pub fn build_l_twovar_yx(q: &IndexPair, p: &IndexPair) -> Result<BarTensor> {
    swap_xy(&build_l_twovar(q, p)?)
}

/// The involution `x ↔ y` of the five-point space.
pub fn swap_xy(b: &BarTensor) -> Result<BarTensor> {
    if b.space() != Space::M05Nxy {
        return Err(Error::Invalid(format!("expected an M05N-xy tensor, got {}", b.space())));
    }
    let n = b.level();
    let mut table = vec![Vec::new(); 3 * n as usize + 2];
    table[m05::dx() as usize] = vec![(m05::dy(n), Q::one())];
    table[m05::dy(n) as usize] = vec![(m05::dx(), Q::one())];
    for a in 0..n as i64 {
        table[m05::dx_at(n, a) as usize] = vec![(m05::dy_at(n, a), Q::one())];
        table[m05::dy_at(n, a) as usize] = vec![(m05::dx_at(n, a), Q::one())];
        table[m05::dxy_at(n, a) as usize] = vec![(m05::dxy_at(n, a), Q::one())];
    }
    b.map_letters(Space::M05Nxy, n, &table)
}
