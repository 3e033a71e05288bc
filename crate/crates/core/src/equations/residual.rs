use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, Series};
use crate::presented::{Morphism, Presentation, QuotientAlgebra, XfVariant};
use crate::scalar::{q, qi, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Pentagon,
    Hexagons,
    MixedPentagon,
    Octagon,
    SpecialAction,
    Distribution,
}

impl Equation {
    pub const ALL: [Equation; 6] = [
        Equation::Pentagon,
        Equation::Hexagons,
        Equation::MixedPentagon,
        Equation::Octagon,
        Equation::SpecialAction,
        Equation::Distribution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Equation::Pentagon => "pentagon",
            Equation::Hexagons => "hexagons",
            Equation::MixedPentagon => "mixed_pentagon",
            Equation::Octagon => "octagon",
            Equation::SpecialAction => "special_action",
            Equation::Distribution => "distribution",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Equation::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::parse("equation", format!("unknown equation {s:?}")))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Normal form of `lhs − rhs` for one equation.
#[derive(Clone, Debug)]
pub struct Residual<C: Scalar = Q> {
    pub equation: Equation,
    /// Distinguishes several residuals of one equation (the two hexagons, divisors N').
    pub label: String,
    pub series: Series<C>,
}

impl<C: Scalar> Residual<C> {
    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    /// Largest coefficient magnitude in each degree `0..=D`.
    pub fn per_degree_max(&self) -> Vec<f64> {
        let alpha = self.series.alphabet();
        let mut v = vec![0.0f64; self.series.maxdeg() as usize + 1];
        for (w, c) in self.series.terms() {
            let d = w.degree(alpha) as usize;
            v[d] = v[d].max(c.magnitude());
        }
        v
    }

    pub fn max_abs(&self) -> f64 {
        self.per_degree_max().into_iter().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Var {
    G,
    H,
}

/// One factor of a product equation.
#[derive(Clone, Debug)]
pub(crate) enum Factor {
    /// `x(images)` or its inverse, for `x` one of the unknown series.
    Sub {
        var: Var,
        images: Vec<Series>,
        inverse: bool,
    },
    /// `exp(μ·X)` for a fixed degree-one `X`.
    ExpMu(Series),
}

/// An equation `Π lhs = Π rhs` in a (possibly quotiented) free algebra.
#[derive(Clone, Debug)]
pub(crate) struct ProductEquation {
    pub equation: Equation,
    pub label: String,
    pub ambient: Arc<Alphabet>,
    pub quotient: Option<Arc<Presentation>>,
    pub lhs: Vec<Factor>,
    pub rhs: Vec<Factor>,
}

fn images_as<C: Scalar>(images: &[Series], maxdeg: u32) -> Vec<Option<Series<C>>> {
    images
        .iter()
        .map(|s| Some(s.with_maxdeg(maxdeg).map_coeffs(C::from_q)))
        .collect()
}

pub(crate) fn substitute<C: Scalar>(x: &Series<C>, images: &[Series]) -> Result<Series<C>> {
    if x.is_zero() {
        let alpha = images[0].alphabet();
        return Ok(Series::zero(alpha, x.maxdeg()));
    }
    x.substitute(&images_as::<C>(images, x.maxdeg()))
}

fn normal_form<C: Scalar>(x: &Series<C>, quotient: &Option<Arc<Presentation>>) -> Result<Series<C>> {
    match quotient {
        None => Ok(x.clone()),
        Some(p) => QuotientAlgebra::new(p.clone(), x.maxdeg())?.normal_form(x),
    }
}

impl ProductEquation {
    fn side<C: Scalar>(
        &self,
        factors: &[Factor],
        g: &Series<C>,
        h: &Series<C>,
        mu: &C,
        d: u32,
    ) -> Result<Series<C>> {
        let mut acc = Series::<C>::one(&self.ambient, d);
        for f in factors {
            let x = match f {
                Factor::Sub {
                    var,
                    images,
                    inverse,
                } => {
                    let src = match var {
                        Var::G => g,
                        Var::H => h,
                    };
                    let src = if *inverse { src.inverse()? } else { src.clone() };
                    substitute(&src, images)?
                }
                Factor::ExpMu(x) => x.with_maxdeg(d).map_coeffs(C::from_q).scale(mu).exp()?,
            };
            acc = acc.concat_mul(&x)?;
        }
        Ok(acc)
    }

    pub fn evaluate<C: Scalar>(
        &self,
        g: &Series<C>,
        h: &Series<C>,
        mu: &C,
    ) -> Result<Residual<C>> {
        let d = if self.uses(Var::G) { g.maxdeg() } else { h.maxdeg() };
        if self.uses(Var::G) && self.uses(Var::H) && g.maxdeg() != h.maxdeg() {
            return Err(Error::TruncationMismatch(g.maxdeg(), h.maxdeg()));
        }
        let diff = self
            .side(&self.lhs, g, h, mu, d)?
            .sub(&self.side(&self.rhs, g, h, mu, d)?)?;
        Ok(Residual {
            equation: self.equation,
            label: self.label.clone(),
            series: normal_form(&diff, &self.quotient)?,
        })
    }

    pub fn uses(&self, v: Var) -> bool {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .any(|f| matches!(f, Factor::Sub { var, .. } if *var == v))
    }

    /// First-order variation when `var` moves by a homogeneous `p`: every
    /// factor has constant term one, so only single-factor variations survive
    /// in the degree of `p`.
    pub fn linear_part(&self, var: Var, p: &Series) -> Result<Series> {
        let mut out = Series::zero(&self.ambient, p.maxdeg());
        for (sign, factors) in [(1, &self.lhs), (-1, &self.rhs)] {
            for f in factors.iter() {
                if let Factor::Sub {
                    var: v,
                    images,
                    inverse,
                } = f
                {
                    if *v == var {
                        let s = if *inverse { -sign } else { sign };
                        out.axpy(&qi(s), &substitute(p, images)?)?;
                    }
                }
            }
        }
        normal_form(&out, &self.quotient)
    }
}

fn letters(alpha: &Arc<Alphabet>) -> Vec<Series> {
    (0..alpha.len() as u16).map(|l| Series::letter(alpha, 1, l)).collect()
}

/// `C = −A − Σ B(a)` in the free algebra on `A, B(0..N)` (or `A, B`).
pub(crate) fn c_letter(alpha: &Arc<Alphabet>) -> Series {
    letters(alpha)
        .iter()
        .fold(Series::zero(alpha, 1), |acc, l| acc.sub(l).unwrap())
}

/// Images of `A, B(0), ..., B(N-1)` under `A ↦ first, B(k) ↦ B(shift + sign·k)`.
fn cyclic_images(alpha: &Arc<Alphabet>, first: Series, shift: i64, sign: i64) -> Vec<Series> {
    let n = alpha.level as i64;
    let mut v = vec![first];
    for k in 0..n {
        v.push(Series::letter(alpha, 1, alpha.b(shift + sign * k)));
    }
    v
}

fn image_set(m: &Morphism) -> Vec<Series> {
    m.images.clone()
}

pub(crate) fn pentagon_equation() -> Result<ProductEquation> {
    let src = Arc::new(Presentation::build_t0_plain(3)?);
    let tgt = Arc::new(Presentation::build_t0_plain(4)?);
    let xf = |f: [Option<u32>; 4]| -> Result<Vec<Series>> {
        Ok(image_set(&Morphism::build_xf(&f, XfVariant::TToT, src.clone(), tgt.clone())?))
    };
    let sub = |images| Factor::Sub {
        var: Var::G,
        images,
        inverse: false,
    };
    Ok(ProductEquation {
        equation: Equation::Pentagon,
        label: "pentagon".into(),
        ambient: tgt.alpha.clone(),
        quotient: Some(tgt.clone()),
        lhs: vec![
            sub(xf([Some(1), Some(2), Some(3), Some(3)])?),
            sub(xf([Some(1), Some(1), Some(2), Some(3)])?),
        ],
        rhs: vec![
            sub(xf([None, Some(1), Some(2), Some(3)])?),
            sub(xf([Some(1), Some(2), Some(2), Some(3)])?),
            sub(xf([Some(1), Some(2), Some(3), None])?),
        ],
    })
}

pub(crate) fn mixed_pentagon_equation(level: u32) -> Result<ProductEquation> {
    let src = Arc::new(Presentation::build_t0(3, level)?);
    let plain = Arc::new(Presentation::build_t0_plain(3)?);
    let tgt = Arc::new(Presentation::build_t0(4, level)?);
    let xf = |f: [Option<u32>; 4]| -> Result<Vec<Series>> {
        Ok(image_set(&Morphism::build_xf(&f, XfVariant::TnToTn, src.clone(), tgt.clone())?))
    };
    let h = |images| Factor::Sub {
        var: Var::H,
        images,
        inverse: false,
    };
    let g234 = Morphism::build_xf(
        &[None, Some(1), Some(2), Some(3)],
        XfVariant::TToTn,
        plain,
        tgt.clone(),
    )?;
    Ok(ProductEquation {
        equation: Equation::MixedPentagon,
        label: "mixed_pentagon".into(),
        ambient: tgt.alpha.clone(),
        quotient: Some(tgt.clone()),
        lhs: vec![
            h(xf([Some(1), Some(2), Some(3), Some(3)])?),
            h(xf([Some(1), Some(1), Some(2), Some(3)])?),
        ],
        rhs: vec![
            Factor::Sub {
                var: Var::G,
                images: image_set(&g234),
                inverse: false,
            },
            h(xf([Some(1), Some(2), Some(2), Some(3)])?),
            h(xf([Some(1), Some(2), Some(3), None])?),
        ],
    })
}

pub(crate) fn hexagon_equations() -> Vec<ProductEquation> {
    let al = Alphabet::f2();
    let [a, b]: [Series; 2] = letters(&al).try_into().unwrap();
    let c = c_letter(&al);
    let g = |images: Vec<Series>| Factor::Sub {
        var: Var::G,
        images,
        inverse: false,
    };
    let half = q(1, 2);
    vec![
        ProductEquation {
            equation: Equation::Hexagons,
            label: "hexagon1".into(),
            ambient: al.clone(),
            quotient: None,
            lhs: vec![g(vec![a.clone(), b.clone()]), g(vec![b.clone(), a.clone()])],
            rhs: vec![],
        },
        ProductEquation {
            equation: Equation::Hexagons,
            label: "hexagon2".into(),
            ambient: al.clone(),
            quotient: None,
            lhs: vec![
                Factor::ExpMu(a.scale(&half)),
                g(vec![c.clone(), a.clone()]),
                Factor::ExpMu(c.scale(&half)),
                g(vec![b.clone(), c.clone()]),
                Factor::ExpMu(b.scale(&half)),
                g(vec![a, b]),
            ],
            rhs: vec![],
        },
    ]
}

pub(crate) fn octagon_equation(level: u32, a: i64) -> ProductEquation {
    let al = Alphabet::cyclotomic(level);
    let ls = letters(&al);
    let c = c_letter(&al);
    let inv_n = q(1, level as i64);
    let h = |images, inverse| Factor::Sub {
        var: Var::H,
        images,
        inverse,
    };
    ProductEquation {
        equation: Equation::Octagon,
        label: "octagon".into(),
        ambient: al.clone(),
        quotient: None,
        lhs: vec![
            h(cyclic_images(&al, ls[0].clone(), a, 1), true),
            Factor::ExpMu(Series::letter(&al, 1, al.b(a)).scale(&q(1, 2))),
            h(cyclic_images(&al, c.clone(), a, -1), false),
            Factor::ExpMu(c.scale(&inv_n)),
            h(cyclic_images(&al, c.clone(), 0, -1), true),
            Factor::ExpMu(Series::letter(&al, 1, al.b(0)).scale(&q(1, 2))),
            h(ls.clone(), false),
            Factor::ExpMu(ls[0].scale(&inv_n)),
        ],
        rhs: vec![],
    }
}

fn check_alphabet<C: Scalar>(x: &Series<C>, alpha: &Arc<Alphabet>) -> Result<()> {
    if x.alphabet() != alpha {
        return Err(Error::AlphabetMismatch(alpha.to_string(), x.alphabet().to_string()));
    }
    Ok(())
}

/// `g^{1,2,34} g^{12,3,4} − g^{2,3,4} g^{1,23,4} g^{1,2,3}` in `U t⁰_4`.
pub fn residual_pentagon<C: Scalar>(g: &Series<C>) -> Result<Residual<C>> {
    check_alphabet(g, &Alphabet::f2())?;
    pentagon_equation()?.evaluate(g, g, &C::zero())
}

/// Both hexagon differences in `U F_2`, `C = −A − B`.
pub fn residual_hexagons<C: Scalar>(g: &Series<C>, mu: &C) -> Result<Vec<Residual<C>>> {
    check_alphabet(g, &Alphabet::f2())?;
    hexagon_equations()
        .iter()
        .map(|e| e.evaluate(g, g, mu))
        .collect()
}

/// `h^{1,2,34} h^{12,3,4} − g^{2,3,4} h^{1,23,4} h^{1,2,3}` in `U t⁰_{4,N}`.
pub fn residual_mixed_pentagon<C: Scalar>(g: &Series<C>, h: &Series<C>) -> Result<Residual<C>> {
    check_alphabet(g, &Alphabet::f2())?;
    let level = h.alphabet().level;
    if h.alphabet() != &Alphabet::cyclotomic(level) {
        return Err(Error::AlphabetMismatch(
            Alphabet::cyclotomic(level).to_string(),
            h.alphabet().to_string(),
        ));
    }
    mixed_pentagon_equation(level)?.evaluate(g, h, &C::zero())
}

/// Octagon product minus one in `U F_{N+1}`.
pub fn residual_octagon<C: Scalar>(h: &Series<C>, mu: &C, a: i64) -> Result<Residual<C>> {
    let level = h.alphabet().level;
    check_alphabet(h, &Alphabet::cyclotomic(level))?;
    octagon_equation(level, a).evaluate(h, h, mu)
}

/// `σ: A ↦ C, B(k) ↦ B(−k)`.
fn sigma_images(alpha: &Arc<Alphabet>) -> Vec<Series> {
    cyclic_images(alpha, c_letter(alpha), 0, -1)
}

fn tau_images(alpha: &Arc<Alphabet>, a: i64) -> Vec<Series> {
    cyclic_images(alpha, Series::letter(alpha, 1, 0), a, 1)
}

/// `A + Σ_a Ad(τ_a h⁻¹)(B(a)) + Ad(h⁻¹ · σh)(C)` in `U F_{N+1}`.
pub fn residual_special_action<C: Scalar>(h: &Series<C>) -> Result<Residual<C>> {
    let alpha = h.alphabet().clone();
    let level = alpha.level;
    check_alphabet(h, &Alphabet::cyclotomic(level))?;
    let d = h.maxdeg();
    let lift = |s: &Series| s.with_maxdeg(d).map_coeffs(C::from_q);
    let hinv = h.inverse()?;
    let mut out = lift(&Series::letter(&alpha, 1, 0));
    for a in 0..level as i64 {
        let t = tau_images(&alpha, a);
        let u = substitute(&hinv, &t)?;
        let uinv = substitute(h, &t)?;
        let x = lift(&Series::letter(&alpha, 1, alpha.b(a)));
        out = out.add(&u.concat_mul(&x)?.concat_mul(&uinv)?)?;
    }
    let sh = substitute(h, &sigma_images(&alpha))?;
    let u = hinv.concat_mul(&sh)?;
    let uinv = u.inverse()?;
    let c = lift(&c_letter(&alpha));
    out = out.add(&u.concat_mul(&c)?.concat_mul(&uinv)?)?;
    Ok(Residual {
        equation: Equation::SpecialAction,
        label: "special_action".into(),
        series: out,
    })
}

/// Linear part in degree `deg p + 1` of the special action residual.
pub(crate) fn special_action_linear(p: &Series) -> Result<Series> {
    let alpha = p.alphabet().clone();
    let d = p.maxdeg();
    let mut out = Series::zero(&alpha, d);
    for a in 0..alpha.level as i64 {
        let tp = substitute(p, &tau_images(&alpha, a))?;
        let x = Series::letter(&alpha, 1, alpha.b(a)).with_maxdeg(d);
        out = out.sub(&tp.bracket(&x)?)?;
    }
    let sp = substitute(p, &sigma_images(&alpha))?.sub(p)?;
    out.add(&sp.bracket(&c_letter(&alpha).with_maxdeg(d))?)
}

/// `π_{NN'}` and `δ_{NN'}` on `U F_{N+1}` as letter images in `U F_{N'+1}`.
pub(crate) fn level_images(level: u32, target: u32) -> Result<(Vec<Series>, Vec<Series>)> {
    if target == 0 || !level.is_multiple_of(target) {
        return Err(Error::LevelMismatch(level, target));
    }
    let src = Arc::new(Presentation::build_t0(3, level)?);
    let tgt = Arc::new(Presentation::build_t0(3, target)?);
    let al = Alphabet::cyclotomic(target);
    let relabel = |m: Morphism| -> Result<Vec<Series>> {
        m.images.iter().map(|s| s.relabel(&al)).collect()
    };
    Ok((
        relabel(Morphism::pi_nn(src.clone(), tgt.clone())?)?,
        relabel(Morphism::delta_nn(src, tgt)?)?,
    ))
}

/// `π_{NN'}(h) − exp{c_{B(0)}(π_{NN'}(h)) B(0)} δ_{NN'}(h)` in `U F_{N'+1}`.
pub fn residual_distribution<C: Scalar>(h: &Series<C>, target: u32) -> Result<Residual<C>> {
    let level = h.alphabet().level;
    check_alphabet(h, &Alphabet::cyclotomic(level))?;
    let (pi, delta) = level_images(level, target)?;
    let ph = substitute(h, &pi)?;
    let dh = substitute(h, &delta)?;
    let al = ph.alphabet().clone();
    let b0 = al.b(0);
    let c = ph.coeff(&crate::ncseries::Word::single(b0));
    let e = Series::<C>::letter(&al, h.maxdeg(), b0).scale(&c).exp()?;
    Ok(Residual {
        equation: Equation::Distribution,
        label: format!("distribution N'={target}"),
        series: ph.sub(&e.concat_mul(&dh)?)?,
    })
}

pub(crate) fn distribution_linear(p: &Series, target: u32) -> Result<Series> {
    let (pi, delta) = level_images(p.alphabet().level, target)?;
    let pp = substitute(p, &pi)?;
    let mut out = pp.sub(&substitute(p, &delta)?)?;
    let b0 = crate::ncseries::Word::single(out.alphabet().b(0));
    let c = pp.coeff(&b0);
    out.add_term(b0, -c);
    Ok(out)
}
