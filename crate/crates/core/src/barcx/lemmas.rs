//! Bar-side series shuffle formula and the auxiliary functional identities
//! evaluated on `h^{1,23,4} h^{1,2,3}` and its `T`-twisted variant.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::mpl::{build_l_in, build_l_twovar, build_l_twovar_yx, MplVar};
use super::os::{certify, pair_on_lift};
use super::pullback::{algebra_map, PullbackTag};
use super::tensor::BarTensor;
use crate::dshuffle::{enumerate_sh_leq, l_coeff, l_i, IndexPair, TPoly};
use crate::equations::residual_mixed_pentagon;
use crate::error::{Error, Result};
use crate::ncseries::{Series, Word};
use crate::scalar::{factorial, Q};

/// Both sides of `l^{ζ(x)}_a · l^{η(y)}_b = Σ_σ l^{σ(ζ(x),η(y))}_{σ(a,b)}`.
#[derive(Clone, Debug)]
pub struct ShuffleBarReport {
    pub lhs: BarTensor,
    pub rhs: BarTensor,
}

impl ShuffleBarReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Exact comparison of the two sides of the series shuffle formula in the
/// coordinate one-form basis.
pub fn series_shuffle_bar_check(p: &IndexPair, q: &IndexPair) -> Result<ShuffleBarReport> {
    if p.level != q.level {
        return Err(Error::LevelMismatch(p.level, q.level));
    }
    let lhs = build_l_in(p, MplVar::X)?.shuffle(&build_l_in(q, MplVar::Y)?)?;
    let (k, l) = (p.depth(), q.depth());
    if k == 0 || l == 0 {
        let rhs = if k == 0 { build_l_in(q, MplVar::Y)? } else { build_l_in(p, MplVar::X)? };
        return Ok(ShuffleBarReport { lhs, rhs });
    }
    let n = p.level;
    let mut rhs = BarTensor::zero(lhs.space(), n)?;
    for sigma in enumerate_sh_leq(k, l) {
        let m = sigma.iter().copied().max().map_or(0, |x| x + 1);
        let mut a = vec![0u32; m];
        let mut e = vec![0u32; m];
        for (s, &slot) in sigma.iter().enumerate() {
            let (x, r) = if s < k { (p.a[s], p.e[s]) } else { (q.a[s - k], q.e[s - k]) };
            a[slot] += x;
            e[slot] = (e[slot] + r) % n;
        }
        let (sx, sy) = (sigma[k - 1], sigma[k + l - 1]);
        let block = |lo: usize, hi: usize| IndexPair {
            a: a[lo..hi].to_vec(),
            e: e[lo..hi].to_vec(),
            level: n,
        };
        let term = if sx == sy {
            build_l_in(&block(0, m), MplVar::XY)?
        } else if sx < sy {
            build_l_twovar(&block(0, sx + 1), &block(sx + 1, m))?
        } else {
            build_l_twovar_yx(&block(0, sy + 1), &block(sy + 1, m))?
        };
        rhs.axpy(&Q::one(), &term)?;
    }
    Ok(ShuffleBarReport { lhs, rhs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma {
    L3,
    L4,
    L5,
    L6,
}

impl Lemma {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            3 => Ok(Lemma::L3),
            4 => Ok(Lemma::L4),
            5 => Ok(Lemma::L5),
            6 => Ok(Lemma::L6),
            _ => Err(Error::Invalid(format!("no lemma {n}; expected 3, 4, 5 or 6"))),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Lemma::L3 => 3,
            Lemma::L4 => 4,
            Lemma::L5 => 5,
            Lemma::L6 => 6,
        }
    }

    fn twisted(self) -> bool {
        matches!(self, Lemma::L5 | Lemma::L6)
    }

    fn needs_g(self) -> bool {
        matches!(self, Lemma::L4 | Lemma::L6)
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lemma {}", self.number())
    }
}

/// One functional identity `lhs = rhs`, both sides polynomials in `T`.
#[derive(Clone, Debug)]
pub struct LemmaIdentity {
    pub label: String,
    pub lhs: TPoly,
    pub rhs: TPoly,
}

impl LemmaIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub identities: Vec<LemmaIdentity>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.identities.iter().all(LemmaIdentity::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaIdentity> {
        self.identities.iter().filter(|i| !i.holds())
    }
}

/// Evaluates bar elements of the five-point space on `e^{TX} h^{1,23,4} h^{1,2,3}`
/// (with `X = t²³(0) + t²⁴(0) + t³⁴(0)`), or on `h^{1,23,4} h^{1,2,3}` when untwisted.
pub struct LemmaContext<'a> {
    lemma: Lemma,
    h: &'a Series,
    /// `X^n/n! · h^{1,23,4} h^{1,2,3}` for `n = 0, 1, ...`.
    components: Vec<Series>,
}

impl<'a> LemmaContext<'a> {
    /// Checks the hypotheses of the lemma up to the truncation of `h`.
    pub fn new(lemma: Lemma, g: Option<&Series>, h: &'a Series) -> Result<Self> {
        let alpha = h.alphabet();
        let level = alpha.level;
        if !h.constant().is_one() {
            return Err(Error::Precondition("the constant term of h must be 1".into()));
        }
        if !h.coeff(&Word::single(0)).is_zero() {
            return Err(Error::Precondition("c_A(h) must vanish".into()));
        }
        if lemma == Lemma::L6 {
            let b0 = alpha.b(0);
            for n in 1..=h.maxdeg() as usize {
                if !h.coeff(&Word::from_slice(&vec![b0; n])).is_zero() {
                    return Err(Error::Precondition(format!("c_(B0^{n})(h) must vanish")));
                }
            }
        }
        if lemma.needs_g() {
            let g = g.ok_or_else(|| Error::Precondition(format!("{lemma} needs the pair (g, h)")))?;
            if !residual_mixed_pentagon(g, h)?.is_zero() {
                return Err(Error::Precondition("(g, h) does not satisfy the mixed pentagon equation".into()));
            }
        }
        let d = h.maxdeg();
        let h1234 = algebra_map(PullbackTag::I1234Div, level)?.apply(h)?;
        let h123 = algebra_map(PullbackTag::I123, level)?.apply(h)?;
        let base = h1234.concat_mul(&h123)?;
        let mut components = vec![base.clone()];
        if lemma.twisted() {
            let t0 = base.alphabet().clone();
            let mut x = Series::zero(&t0, d);
            for name in ["t23(0)", "t24(0)", "t34(0)"] {
                x = x.add(&Series::named(&t0, d, name)?)?;
            }
            let mut power = base;
            for n in 1..=d {
                power = x.concat_mul(&power)?;
                components.push(power.scale(&factorial(n).recip()));
            }
        }
        Ok(LemmaContext { lemma, h, components })
    }

    /// `b(e^{TX} h^{1,23,4} h^{1,2,3})` as a polynomial in `T`.
    pub fn evaluate(&self, b: &BarTensor) -> Result<TPoly> {
        if !certify(b)?.holds() {
            return Err(Error::Precondition("bar tensor is not an H⁰ element".into()));
        }
        let coeffs = self
            .components
            .iter()
            .map(|c| pair_on_lift(b, c))
            .collect::<Result<Vec<Q>>>()?;
        Ok(TPoly::from_coeffs(coeffs))
    }

    fn reference(&self, p: &IndexPair) -> Result<TPoly> {
        match self.lemma {
            Lemma::L5 => l_i(self.h, p),
            _ => Ok(TPoly::constant(l_coeff(self.h, p)?)),
        }
    }

    /// The identities of the lemma for one choice of `p = (a; ζ)`, `q = (b; η)`.
    /// For lemmas 3 and 5 an empty `q` selects the three one-variable
    /// identities and a nonempty `q` the two-variable one.
    pub fn identities(&self, p: &IndexPair, q: &IndexPair) -> Result<Vec<LemmaIdentity>> {
        let mut out = Vec::new();
        match self.lemma {
            Lemma::L3 | Lemma::L5 => {
                if !p.is_empty() && q.is_empty() {
                    let rhs = self.reference(p)?;
                    for (v, name) in [(MplVar::X, "x"), (MplVar::Y, "y"), (MplVar::XY, "xy")] {
                        out.push(LemmaIdentity {
                            label: format!("l^({name})_{p}"),
                            lhs: self.evaluate(&build_l_in(p, v)?)?,
                            rhs: rhs.clone(),
                        });
                    }
                }
                if !p.is_empty() && !q.is_empty() {
                    out.push(LemmaIdentity {
                        label: format!("l^(x,y)_{p}|{q}"),
                        lhs: self.evaluate(&build_l_twovar(p, q)?)?,
                        rhs: self.reference(&p.concat(q)?)?,
                    });
                }
            }
            Lemma::L4 | Lemma::L6 => {
                if p.is_empty() || q.is_empty() {
                    return Ok(out);
                }
                if !p.is_admissible() || (self.lemma == Lemma::L4 && !q.is_admissible()) {
                    return Err(Error::Precondition(format!("{} needs admissible indices", self.lemma)));
                }
                out.push(LemmaIdentity {
                    label: format!("l^(y,x)_{q}|{p}"),
                    lhs: self.evaluate(&build_l_twovar_yx(q, p)?)?,
                    rhs: TPoly::constant(l_coeff(self.h, &q.concat(p)?)?),
                });
            }
        }
        Ok(out)
    }
}

/// Checks the lemma for a single pair of indices.
pub fn verify_lemma(
    lemma: Lemma,
    g: Option<&Series>,
    h: &Series,
    p: &IndexPair,
    q: &IndexPair,
) -> Result<LemmaReport> {
    let weight = p.weight() + q.weight();
    if weight > h.maxdeg() {
        return Err(Error::DegreeOverflow(weight, h.maxdeg()));
    }
    let ctx = LemmaContext::new(lemma, g, h)?;
    Ok(LemmaReport {
        lemma,
        identities: ctx.identities(p, q)?,
    })
}

/// Checks the lemma for every admissible choice of indices with total
/// weight at most `bound`.
pub fn verify_lemma_up_to(lemma: Lemma, g: Option<&Series>, h: &Series, bound: u32) -> Result<LemmaReport> {
    if bound > h.maxdeg() {
        return Err(Error::DegreeOverflow(bound, h.maxdeg()));
    }
    let level = h.alphabet().level;
    let ctx = LemmaContext::new(lemma, g, h)?;
    let mut identities = Vec::new();
    for wp in 1..=bound {
        for p in IndexPair::all_of_weight(wp, level) {
            let qs = (0..=bound - wp).flat_map(|wq| IndexPair::all_of_weight(wq, level));
            for q in qs {
                let wanted = match lemma {
                    Lemma::L3 | Lemma::L5 => true,
                    Lemma::L4 => !q.is_empty() && p.is_admissible() && q.is_admissible(),
                    Lemma::L6 => !q.is_empty() && p.is_admissible(),
                };
                if wanted {
                    identities.extend(ctx.identities(&p, &q)?);
                }
            }
        }
    }
    Ok(LemmaReport { lemma, identities })
}
