//! The cyclotomic KZ associator `Φ = H₁⁻¹ H₀` for
//! `H' = (A/z + Σ_a B(a)/(z − ζ^a)) H`.
//!
//! `H₀ = P(z) z^A` and `H₁ = Q(1 − z) (1 − z)^{B(0)}` with `P`, `Q` holomorphic
//! near 0 and 1. Both are computed as convergent power series and combined
//! at a point `s` inside both discs of convergence, so no endpoint cut-off
//! enters the result.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::approx::{root_of_unity, ApproxValue, Precision};
use super::values::mlv;
use crate::dshuffle::IndexPair;
use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, Series, Word};

type CSeries = Series<Complex64>;

/// A numeric series with a uniform bound on the error of every coefficient.
#[derive(Clone, Debug)]
pub struct ApproxSeries {
    pub series: CSeries,
    pub error: f64,
}

impl ApproxSeries {
    pub fn coeff(&self, w: &Word) -> ApproxValue {
        ApproxValue {
            value: self.series.coeff(w),
            error: self.error,
        }
    }

    pub fn coeff_of(&self, names: &[&str]) -> Result<ApproxValue> {
        Ok(ApproxValue {
            value: self.series.coeff_of(names)?,
            error: self.error,
        })
    }

    /// Largest coefficient difference to another series.
    pub fn max_diff(&self, other: &CSeries) -> Result<f64> {
        Ok(self.series.sub(other)?.terms().values().map(|c| c.norm()).fold(0.0, f64::max))
    }
}

/// Where the two local solutions are compared, and how many series terms
/// are used on each side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathSpec {
    /// Matching point `s ∈ (0, 1)`.
    pub split: f64,
    /// Number of power series terms at each end.
    pub terms: usize,
}

impl PathSpec {
    /// The split balancing both convergence ratios, with enough terms for `prec`.
    pub fn for_level(level: u32, prec: Precision) -> Self {
        let delta = near_one_radius(level);
        let split = 1.0 / (1.0 + delta);
        let ratio = split.max((1.0 - split) / delta);
        let mut terms = 16usize;
        while ratio.powi(terms as i32) * (terms as f64).powi(8) > prec.tolerance() * 1e-3 {
            terms += 8;
        }
        PathSpec { split, terms }
    }

    fn validate(&self, level: u32) -> Result<()> {
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::Invalid(format!("split point must lie in (0, 1), got {}", self.split)));
        }
        let delta = near_one_radius(level);
        if (1.0 - self.split) / delta >= 0.98 || self.split >= 0.98 {
            return Err(Error::Numeric(format!(
                "split {} lies outside the convergence discs at N = {level}",
                self.split
            )));
        }
        Ok(())
    }
}

/// Radius of convergence of the expansion at 1: distance from 1 to the
/// nearest other singular point.
fn near_one_radius(level: u32) -> f64 {
    (1..level as i64)
        .map(|a| (Complex64::one() - root_of_unity(level, a)).norm())
        .fold(1.0, f64::min)
}

/// Solves `X' = [L, X]/t + Σ ℓ·(−Σ_j c^{j+1} t^j)·X`, `X(0) = 1`, as
/// `Σ X_n t^n` and evaluates at `t0`. Returns the value and a tail bound.
fn frobenius(
    alpha: &Arc<Alphabet>,
    weight: u32,
    residue: u16,
    poles: &[(u16, Complex64)],
    t0: f64,
    terms: usize,
) -> Result<(CSeries, f64)> {
    let l = CSeries::letter(alpha, weight, residue);
    let letters: Vec<CSeries> = poles.iter().map(|(x, _)| CSeries::letter(alpha, weight, *x)).collect();
    // running sums S_ℓ(n) = −Σ_j c^{j+1} X_{n−1−j}
    let mut sums: Vec<CSeries> = poles.iter().map(|_| CSeries::zero(alpha, weight)).collect();
    let mut x = CSeries::one(alpha, weight);
    let mut total = x.clone();
    let mut tpow = 1.0;
    let mut norms = Vec::with_capacity(terms);
    for n in 1..=terms {
        for (s, (_, c)) in sums.iter_mut().zip(poles) {
            *s = s.sub(&x)?.scale(c);
        }
        let mut r = CSeries::zero(alpha, weight);
        for (ltr, s) in letters.iter().zip(&sums) {
            r = r.add(&ltr.concat_mul(s)?)?;
        }
        // (n − ad_L)⁻¹ = Σ_k ad_L^k / n^{k+1}; ad_L raises the weight
        let nf = n as f64;
        let mut term = r.scale(&Complex64::new(1.0 / nf, 0.0));
        let mut next = CSeries::zero(alpha, weight);
        for _ in 0..=weight {
            if term.is_zero() {
                break;
            }
            next = next.add(&term)?;
            term = l.bracket(&term)?.scale(&Complex64::new(1.0 / nf, 0.0));
        }
        x = next;
        tpow *= t0;
        total = total.add(&x.scale(&Complex64::new(tpow, 0.0)))?;
        norms.push(x.terms().values().map(|c| c.norm()).fold(0.0, f64::max) * tpow);
    }
    // Tail: the last terms decay geometrically; bound by their size and ratio.
    let last = norms.last().copied().unwrap_or(0.0);
    let prev = norms.iter().rev().nth(4).copied().unwrap_or(last).max(1e-300);
    let ratio = if last > 0.0 { (last / prev).powf(0.25).min(0.99) } else { 0.0 };
    let tail = 4.0 * last * ratio / (1.0 - ratio);
    Ok((total, tail))
}

fn exp_letter(alpha: &Arc<Alphabet>, weight: u32, l: u16, c: f64) -> Result<CSeries> {
    CSeries::letter(alpha, weight, l).scale(&Complex64::new(c, 0.0)).exp()
}

/// `Φ^N_KZ` up to `weight`, from the local solutions matched at `path.split`.
pub fn phi_kz_with(level: u32, weight: u32, path: PathSpec) -> Result<ApproxSeries> {
    if level == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    path.validate(level)?;
    let alpha = Alphabet::cyclotomic(level);
    let s = path.split;
    let at_zero: Vec<(u16, Complex64)> = (0..level as i64)
        .map(|a| (alpha.b(a), root_of_unity(level, -a)))
        .collect();
    let mut at_one: Vec<(u16, Complex64)> = vec![(0, Complex64::one())];
    at_one.extend((1..level as i64).map(|a| (alpha.b(a), (Complex64::one() - root_of_unity(level, a)).inv())));
    let (p, ep) = frobenius(&alpha, weight, 0, &at_zero, s, path.terms)?;
    let (q, eq) = frobenius(&alpha, weight, alpha.b(0), &at_one, 1.0 - s, path.terms)?;
    let h0 = p.concat_mul(&exp_letter(&alpha, weight, 0, s.ln())?)?;
    let h1_inv = exp_letter(&alpha, weight, alpha.b(0), -(1.0 - s).ln())?.concat_mul(&q.inverse()?)?;
    let phi = h1_inv.concat_mul(&h0)?;
    // Each factor has coefficients of moderate size; propagate the tails
    // through the two products with a generous constant.
    let size = |x: &CSeries| x.terms().values().map(|c| c.norm()).sum::<f64>();
    let error = (ep * size(&h1_inv) + eq * size(&h0) * size(&q.inverse()?)) * 4.0 + 1e-14 * size(&phi);
    Ok(ApproxSeries { series: phi, error })
}

/// `Φ^N_KZ` with the default path for `prec`.
pub fn phi_kz(level: u32, weight: u32, prec: Precision) -> Result<ApproxSeries> {
    phi_kz_with(level, weight, PathSpec::for_level(level, prec))
}

/// `Φ^N_KZ` from its explicit coefficient formula: convergent coefficients
/// are signed multiple L-values, the rest follow from group-likeness with
/// `c_A = c_{B(0)} = 0` by shuffle regularization.
pub fn phi_kz_from_mlv(level: u32, weight: u32, prec: Precision) -> Result<ApproxSeries> {
    let alpha = Alphabet::cyclotomic(level);
    let mut out = CSeries::zero(&alpha, weight);
    let mut memo: HashMap<Vec<u16>, ApproxValue> = HashMap::new();
    let mut error = 0.0f64;
    let mut layer: Vec<Vec<u16>> = vec![vec![]];
    for _ in 0..=weight {
        let mut next = Vec::new();
        for w in &layer {
            let v = regularized_coeff(&alpha, w, prec, &mut memo)?;
            out.add_term(Word::from_slice(w), v.value);
            error = error.max(v.error);
            for l in 0..alpha.len() as u16 {
                let mut u = w.clone();
                u.push(l);
                next.push(u);
            }
        }
        layer = next;
    }
    Ok(ApproxSeries { series: out, error })
}

/// `A^{k_m−1}B(a_m)⋯A^{k₁−1}B(a₁)` ↦ `(k; ξ)` with `ξ_i = ζ^{a_{i+1}−a_i}`, `ξ_m = ζ^{−a_m}`.
fn word_index(alpha: &Alphabet, w: &[u16]) -> IndexPair {
    let n = alpha.level;
    let mut ks = Vec::new();
    let mut bs = Vec::new();
    let mut run = 0u32;
    for &l in w {
        if l == 0 {
            run += 1;
        } else {
            ks.push(run + 1);
            bs.push((l - alpha.b(0)) as i64);
            run = 0;
        }
    }
    ks.reverse();
    bs.reverse();
    let m = ks.len();
    let es: Vec<i64> = (0..m)
        .map(|i| if i + 1 < m { bs[i + 1] - bs[i] } else { -bs[i] })
        .collect();
    IndexPair::new(ks, es, n).expect("valid index")
}

fn regularized_coeff(
    alpha: &Alphabet,
    w: &[u16],
    prec: Precision,
    memo: &mut HashMap<Vec<u16>, ApproxValue>,
) -> Result<ApproxValue> {
    if let Some(v) = memo.get(w) {
        return Ok(*v);
    }
    let b0 = alpha.b(0);
    let trailing = w.iter().rev().take_while(|&&l| l == 0).count();
    let leading = w.iter().take_while(|&&l| l == b0).count();
    let zero = ApproxValue::exact(Complex64::zero());
    let v = if w.is_empty() {
        ApproxValue::exact(Complex64::one())
    } else if trailing > 0 {
        let u = &w[..w.len() - trailing];
        let mut acc = zero;
        for i in 0..u.len() {
            let mut x = u[..i].to_vec();
            x.push(0);
            x.extend_from_slice(&u[i..]);
            x.extend(std::iter::repeat_n(0, trailing - 1));
            acc = acc + regularized_coeff(alpha, &x, prec, memo)?;
        }
        acc.scale(Complex64::new(-1.0 / trailing as f64, 0.0))
    } else if leading > 0 {
        let u = &w[leading..];
        let mut acc = zero;
        for i in 1..=u.len() {
            let mut x = vec![b0; leading - 1];
            x.extend_from_slice(&u[..i]);
            x.push(b0);
            x.extend_from_slice(&u[i..]);
            acc = acc + regularized_coeff(alpha, &x, prec, memo)?;
        }
        acc.scale(Complex64::new(-1.0 / leading as f64, 0.0))
    } else {
        let p = word_index(alpha, w);
        let v = mlv(&p, prec)?;
        if p.depth() % 2 == 1 {
            -v
        } else {
            v
        }
    };
    memo.insert(w.to_vec(), v);
    Ok(v)
}
