//! Multiple L-values, multiple polylogarithms by nested summation, and
//! numeric evaluation of bar elements along straight paths.

use num_complex::Complex64;
use num_traits::Zero;

use super::approx::{root_of_unity, ApproxValue, Precision};
use super::iterated::g_at_one;
use crate::barcx::{m04, m05, BarTensor, Space};
use crate::dshuffle::IndexPair;
use crate::error::{Error, Result};

/// The letters of `L(k; ζ)` as an integral from 0 to 1: `(−1)^m G(0^{k_m−1},
/// c_m, …, 0^{k₁−1}, c₁; 1)` with `c_j = (ζ_m ⋯ ζ_j)⁻¹`.
fn mlv_letters(p: &IndexPair) -> Vec<Complex64> {
    let n = p.level;
    let mut out = Vec::new();
    let mut acc = 0i64;
    for (&k, &e) in p.a.iter().zip(&p.e).rev() {
        out.extend(std::iter::repeat_n(Complex64::zero(), k as usize - 1));
        acc -= e as i64;
        out.push(root_of_unity(n, acc));
    }
    out
}

/// `L(k₁, …, k_m; ζ₁, …, ζ_m) = Σ_{0<n₁<⋯<n_m} ζ₁^{n₁}⋯ζ_m^{n_m} / n₁^{k₁}⋯n_m^{k_m}`.
pub fn mlv(p: &IndexPair, prec: Precision) -> Result<ApproxValue> {
    if p.is_empty() {
        return Ok(ApproxValue::exact(Complex64::new(1.0, 0.0)));
    }
    if !p.is_admissible() {
        return Err(Error::Invalid(format!("{p} is not admissible: the series diverges")));
    }
    let v = g_at_one(&mlv_letters(p), prec.tolerance())?;
    Ok(if p.depth() % 2 == 1 { -v } else { v })
}

/// `Σ_{0<n₁<⋯<n_k} z₁^{n₁}⋯z_k^{n_k} / n₁^{a₁}⋯n_k^{a_k}` by direct summation,
/// for `|z_k| < 1` and `|z_i| ≤ 1`.
pub fn nested_polylog(a: &[u32], z: &[Complex64], prec: Precision) -> Result<ApproxValue> {
    if a.len() != z.len() {
        return Err(Error::Invalid("exponents and arguments differ in length".into()));
    }
    let k = a.len();
    if k == 0 {
        return Ok(ApproxValue::exact(Complex64::new(1.0, 0.0)));
    }
    if a.contains(&0) {
        return Err(Error::Invalid("exponents must be positive".into()));
    }
    if z[..k - 1].iter().any(|x| x.norm() > 1.0 + 1e-12) {
        return Err(Error::Invalid("inner arguments must lie in the closed unit disc".into()));
    }
    let r = z[k - 1].norm();
    if r >= 1.0 {
        return Err(Error::Invalid(format!("outer argument must satisfy |z| < 1, got {r}")));
    }
    if r == 0.0 {
        return Ok(ApproxValue::exact(Complex64::zero()));
    }
    // Term n of the outer sum is at most r^n (1 + log n)^{k−1}.
    let tol = prec.tolerance() * 1e-2;
    let bound = |n: usize| r.powi(n as i32) * (1.0 + (n as f64).ln()).powi(k as i32 - 1) / (1.0 - r);
    let mut terms = 8usize;
    while bound(terms) > tol {
        terms += 8;
        if terms > 50_000_000 {
            return Err(Error::Numeric("outer argument too close to the unit circle".into()));
        }
    }
    // sums[j] = Σ_{n₁<⋯<n_j ≤ n} of the first j factors
    let mut sums = vec![Complex64::zero(); k + 1];
    sums[0] = Complex64::new(1.0, 0.0);
    let mut pw = vec![Complex64::new(1.0, 0.0); k];
    let mut scale = 0.0f64;
    for n in 1..=terms {
        let nf = n as f64;
        for j in (1..=k).rev() {
            pw[j - 1] *= z[j - 1];
            let t = sums[j - 1] * pw[j - 1] / nf.powi(a[j - 1] as i32);
            sums[j] += t;
            if j == k {
                scale += t.norm();
            }
        }
    }
    Ok(ApproxValue {
        value: sums[k],
        error: 2.0 * bound(terms + 1) + 8.0 * f64::EPSILON * (scale + 1.0) * (terms as f64).sqrt(),
    })
}

/// `Li_{a,b}(ζ(x), η(y))`, the two-variable multiple polylogarithm.
pub fn mpl_two_var(p: &IndexPair, q: &IndexPair, x: Complex64, y: Complex64, prec: Precision) -> Result<ApproxValue> {
    if p.level != q.level {
        return Err(Error::LevelMismatch(p.level, q.level));
    }
    if p.is_empty() || q.is_empty() {
        return Err(Error::Invalid("both index blocks must be nonempty".into()));
    }
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::Invalid("the two-variable series needs |x| < 1 and |y| < 1".into()));
    }
    let n = p.level;
    let mut z: Vec<Complex64> = p.e.iter().map(|&e| root_of_unity(n, e as i64)).collect();
    *z.last_mut().expect("nonempty") *= x;
    let mut zy: Vec<Complex64> = q.e.iter().map(|&e| root_of_unity(n, e as i64)).collect();
    *zy.last_mut().expect("nonempty") *= y;
    z.extend(zy);
    let a: Vec<u32> = p.a.iter().chain(&q.a).copied().collect();
    nested_polylog(&a, &z, prec)
}

/// `Li_a(ζ(v)) = Li_a(ζ₁, …, ζ_{k−1}, ζ_k v)`.
pub fn mpl_one_var(p: &IndexPair, v: Complex64, prec: Precision) -> Result<ApproxValue> {
    if p.is_empty() {
        return Ok(ApproxValue::exact(Complex64::new(1.0, 0.0)));
    }
    let mut z: Vec<Complex64> = p.e.iter().map(|&e| root_of_unity(p.level, e as i64)).collect();
    *z.last_mut().expect("nonempty") *= v;
    nested_polylog(&p.a, &z, prec)
}

/// Pole letters of one pulled-back form along `t ↦ (t x, t y)` (or `t ↦ t z`):
/// `None` when the form restricts to zero.
fn pole_letters(space: Space, level: u32, letter: u16, x: Complex64, y: Complex64) -> Option<Vec<Complex64>> {
    let zero = Complex64::zero();
    let shifted = |v: Complex64, a: u16| (v.norm() > 0.0).then(|| vec![root_of_unity(level, a as i64) / v]);
    match space {
        Space::M04N => {
            if letter == m04::w0() {
                Some(vec![zero])
            } else {
                shifted(x, letter - m04::w(level, 0))
            }
        }
        Space::M05Nxy => {
            let n = level as u16;
            if letter == m05::dx() || letter == m05::dy(level) {
                Some(vec![zero])
            } else if letter < m05::dy(level) {
                shifted(x, letter - m05::dx_at(level, 0))
            } else if letter < m05::dxy_at(level, 0) {
                shifted(y, letter - m05::dy_at(level, 0))
            } else {
                let a = letter - m05::dxy_at(level, 0);
                debug_assert!(a < n);
                let xy = x * y;
                // dlog(t²xy − ζ^a) = dt/(t − r) + dt/(t + r), r² = ζ^a/(xy)
                (xy.norm() > 0.0).then(|| {
                    let r = (root_of_unity(level, a as i64) / xy).sqrt();
                    vec![r, -r]
                })
            }
        }
        Space::WNz => None,
    }
}

/// The iterated integral of a bar element along the straight path from the
/// tangential base point at the origin to `(x, y)` (or to `z` for `M04N`,
/// passed as `x`), regularized with `∫ dt/t = 0` at the origin.
pub fn bar_value(b: &BarTensor, x: Complex64, y: Complex64, prec: Precision) -> Result<ApproxValue> {
    if b.space() == Space::WNz {
        return Err(Error::Invalid("evaluation is implemented for the M04N and M05N-xy pictures".into()));
    }
    let n = b.level();
    let mut total = ApproxValue::exact(Complex64::zero());
    let count = b.len().max(1) as f64;
    for (w, c) in b.terms() {
        let mut words: Vec<Vec<Complex64>> = vec![vec![]];
        for &l in w.letters() {
            let Some(poles) = pole_letters(b.space(), n, l, x, y) else {
                words.clear();
                break;
            };
            words = words
                .into_iter()
                .flat_map(|pre| {
                    poles.iter().map(move |p| {
                        let mut v = pre.clone();
                        v.push(*p);
                        v
                    })
                })
                .collect();
        }
        let cf = crate::scalar::q_to_f64(c);
        for letters in words {
            let v = g_at_one(&letters, prec.tolerance() / count)?;
            total = total + v.scale(Complex64::new(cf, 0.0));
        }
    }
    Ok(total)
}
