//! Iterated integrals `G(c₁, …, c_n; y) = ∫_{0<t_n<⋯<t₁<y} Π dtᵢ/(tᵢ − cᵢ)`
//! (first letter outermost), evaluated by power series.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::Zero;

use super::approx::ApproxValue;
use crate::error::{Error, Result};

/// Largest admissible ratio `|y| / min|c|` for a power series evaluation.
const MAX_RATIO: f64 = 0.95;

fn is_zero(c: Complex64) -> bool {
    c.norm() < 1e-300
}

/// `G(letters; y)` for a word whose innermost letter is nonzero and whose
/// nonzero letters all lie outside the disc of radius `|y|`.
pub(crate) fn g_series(letters: &[Complex64], y: Complex64, tol: f64) -> Result<ApproxValue> {
    let n = letters.len();
    if n == 0 {
        return Ok(ApproxValue::exact(Complex64::new(1.0, 0.0)));
    }
    let inner = letters[n - 1];
    if is_zero(inner) {
        return Err(Error::Invalid("innermost letter must be nonzero".into()));
    }
    if y.norm() == 0.0 {
        return Ok(ApproxValue::exact(Complex64::zero()));
    }
    let rho = letters
        .iter()
        .filter(|c| !is_zero(**c))
        .map(|c| c.norm())
        .fold(f64::INFINITY, f64::min);
    let r = y.norm() / rho;
    if r >= MAX_RATIO {
        return Err(Error::Numeric(format!("power series ratio {r:.3} too close to 1")));
    }
    // Enough terms that r^K K^n is far below the tolerance.
    let mut k = 16usize;
    while r.powi(k as i32) * (k as f64).powi(n as i32) > tol * 1e-3 && k < 20_000 {
        k += 8;
    }
    let big = 2 * k;
    // Coefficients of t^j of the running integral and of its majorant.
    let mut f = vec![Complex64::zero(); big + 1];
    let mut m = vec![0.0f64; big + 1];
    let mut p = Complex64::new(1.0, 0.0);
    let mut pm = 1.0;
    for j in 1..=big {
        p /= inner;
        pm /= rho;
        f[j] = -p / j as f64;
        m[j] = pm / j as f64;
    }
    for &c in letters[..n - 1].iter().rev() {
        let mut g = vec![Complex64::zero(); big + 1];
        let mut gm = vec![0.0f64; big + 1];
        if is_zero(c) {
            for j in 1..=big {
                g[j] = f[j] / j as f64;
                gm[j] = m[j] / j as f64;
            }
        } else {
            let mut acc = Complex64::zero();
            let mut accm = 0.0;
            for j in 0..big {
                acc = (acc - f[j]) / c;
                accm = (accm + m[j]) / rho;
                g[j + 1] = acc / (j + 1) as f64;
                gm[j + 1] = accm / (j + 1) as f64;
            }
        }
        f = g;
        m = gm;
    }
    let ay = y.norm();
    let mut value = Complex64::zero();
    let mut yp = Complex64::new(1.0, 0.0);
    let mut scale = 0.0;
    let mut ayp = 1.0;
    for j in 1..=k {
        yp *= y;
        ayp *= ay;
        value += f[j] * yp;
        scale += m[j] * ayp;
    }
    let mut tail = 0.0;
    for mj in &m[k + 1..=big] {
        ayp *= ay;
        tail += mj * ayp;
    }
    // Beyond 2K the majorant decays at least geometrically with ratio r·(1 + 1/K)^n.
    let q = r * (1.0 + 1.0 / big as f64).powi(n as i32);
    tail += m[big] * ayp * q / (1.0 - q);
    Ok(ApproxValue {
        value,
        error: tail + 4.0 * f64::EPSILON * scale * (n as f64 + 1.0) * (k as f64).sqrt(),
    })
}

/// `G(letters; 1)` with tangential base points at both ends: trailing zero
/// letters are shuffle-regularized with `G(0; 1) = 0`, and the path is
/// split where both halves converge geometrically.
pub(crate) fn g_at_one(letters: &[Complex64], tol: f64) -> Result<ApproxValue> {
    let mut memo = HashMap::new();
    g_reg(letters, tol, &mut memo)
}

type Key = Vec<(u64, u64)>;

fn key(letters: &[Complex64]) -> Key {
    letters.iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect()
}

fn g_reg(letters: &[Complex64], tol: f64, memo: &mut HashMap<Key, ApproxValue>) -> Result<ApproxValue> {
    if let Some(v) = memo.get(&key(letters)) {
        return Ok(*v);
    }
    let trailing = letters.iter().rev().take_while(|c| is_zero(**c)).count();
    let v = if letters.is_empty() {
        ApproxValue::exact(Complex64::new(1.0, 0.0))
    } else if trailing == letters.len() {
        ApproxValue::exact(Complex64::zero())
    } else if trailing > 0 {
        // 0 ш (u 0^{r−1}) = r·u 0^r + Σ (0 inserted inside u) 0^{r−1}
        let u = &letters[..letters.len() - trailing];
        let mut acc = ApproxValue::exact(Complex64::zero());
        for i in 0..u.len() {
            let mut w = u[..i].to_vec();
            w.push(Complex64::zero());
            w.extend_from_slice(&u[i..]);
            w.extend(std::iter::repeat_n(Complex64::zero(), trailing - 1));
            acc = acc + g_reg(&w, tol, memo)?;
        }
        acc.scale(Complex64::new(-1.0 / trailing as f64, 0.0))
    } else {
        g_split(letters, tol)?
    };
    memo.insert(key(letters), v);
    Ok(v)
}

/// Path composition `[0, 1] = [0, s]·[s, 1]`: the outer letters run over
/// `[s, 1]`, rewritten in `u = 1 − t`.
fn g_split(letters: &[Complex64], tol: f64) -> Result<ApproxValue> {
    let one = Complex64::new(1.0, 0.0);
    if (letters[0] - one).norm() < 1e-300 {
        return Err(Error::Invalid("outermost letter 1 diverges at the endpoint".into()));
    }
    let rho_in = letters
        .iter()
        .filter(|c| !is_zero(**c))
        .map(|c| c.norm())
        .fold(f64::INFINITY, f64::min);
    let rho_out = letters
        .iter()
        .map(|c| (one - c).norm())
        .filter(|d| *d > 1e-300)
        .fold(f64::INFINITY, f64::min);
    if 1.0 / (rho_in + rho_out) >= MAX_RATIO {
        return Err(Error::Numeric("no split point gives a convergent expansion".into()));
    }
    let s = if rho_out.is_infinite() {
        0.5
    } else {
        (rho_in / (rho_in + rho_out)).clamp(0.05, 0.95)
    };
    let n = letters.len();
    let mut total = ApproxValue::exact(Complex64::zero());
    let part_tol = tol / (n as f64 + 1.0);
    for j in 0..=n {
        let outer: Vec<Complex64> = letters[..j].iter().rev().map(|c| one - c).collect();
        let inner = &letters[j..];
        let a = g_series(&outer, Complex64::new(1.0 - s, 0.0), part_tol)?;
        let b = g_series(inner, Complex64::new(s, 0.0), part_tol)?;
        let ab = a * b;
        total = total + if j % 2 == 1 { -ab } else { ab };
    }
    Ok(total)
}
