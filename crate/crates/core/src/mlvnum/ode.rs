//! Finite-difference checks of the differential equations satisfied by
//! one- and two-variable multiple polylogarithms.

use num_complex::Complex64;
use serde::Serialize;

use super::approx::{root_of_unity, ApproxValue, Precision};
use super::values::{mpl_one_var, mpl_two_var};
use crate::dshuffle::IndexPair;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct OdeRow {
    pub label: String,
    /// Central difference quotient, with truncation and rounding bound.
    pub numeric: ApproxValue,
    /// Right-hand side of the differential equation.
    pub formula: ApproxValue,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OdeReport {
    pub rows: Vec<OdeRow>,
}

impl OdeReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn block(a: &[u32], e: &[u32], level: u32) -> IndexPair {
    IndexPair {
        a: a.to_vec(),
        e: e.to_vec(),
        level,
    }
}

fn merge(x: u32, y: u32, n: u32) -> u32 {
    (x + y) % n
}

/// `1/(ζ^{−e} − v)`.
fn pole(level: u32, e: u32, v: Complex64) -> Complex64 {
    (root_of_unity(level, -(e as i64)) - v).inv()
}

fn c(v: Complex64) -> ApproxValue {
    ApproxValue::exact(v)
}

/// `(f(v + δ) − f(v − δ))/2δ`, with the difference to the `2δ` quotient as
/// truncation estimate.
fn central(f: impl Fn(Complex64) -> Result<ApproxValue>, v: Complex64, delta: f64) -> Result<ApproxValue> {
    let d = Complex64::new(delta, 0.0);
    let quotient = |h: Complex64| -> Result<(Complex64, f64)> {
        let (a, b) = (f(v + h)?, f(v - h)?);
        Ok(((a.value - b.value) / (2.0 * h), (a.error + b.error) / (2.0 * h.norm())))
    };
    let (d1, e1) = quotient(d)?;
    let (d2, e2) = quotient(2.0 * d)?;
    Ok(ApproxValue {
        value: d1,
        error: (d2 - d1).norm() + e1 + e2 + 1e-14 / delta,
    })
}

fn row(label: String, numeric: ApproxValue, formula: ApproxValue) -> OdeRow {
    let pass = (numeric.value - formula.value).norm() <= numeric.error + formula.error + 1e-9;
    OdeRow {
        label,
        numeric,
        formula,
        pass,
    }
}

/// Derivative of `Li_a(ζ(z))` from its differential equation.
fn onevar_rhs(p: &IndexPair, z: Complex64, prec: Precision) -> Result<(String, ApproxValue)> {
    let (a, e, n) = (&p.a, &p.e, p.level);
    let k = a.len();
    if a[k - 1] >= 2 {
        let mut a2 = a.clone();
        a2[k - 1] -= 1;
        let v = mpl_one_var(&block(&a2, e, n), z, prec)?;
        return Ok(("a_k >= 2".into(), v.scale(z.inv())));
    }
    let pl = pole(n, e[k - 1], z);
    if k == 1 {
        return Ok(("a_k = 1, k = 1".into(), c(pl)));
    }
    let mut e2 = e[..k - 1].to_vec();
    e2[k - 2] = merge(e[k - 2], e[k - 1], n);
    let v = mpl_one_var(&block(&a[..k - 1], &e2, n), z, prec)?;
    Ok(("a_k = 1, k > 1".into(), v.scale(pl)))
}

/// `∂/∂x` of `Li_{a,b}(ζ(x), η(y))` from its differential equation.
fn dx_rhs(p: &IndexPair, q: &IndexPair, x: Complex64, y: Complex64, prec: Precision) -> Result<(String, ApproxValue)> {
    let n = p.level;
    let (a, e, b, f) = (&p.a, &p.e, &q.a, &q.e);
    let (k, l) = (a.len(), b.len());
    if a[k - 1] >= 2 {
        let mut a2 = a.clone();
        a2[k - 1] -= 1;
        let v = mpl_two_var(&block(&a2, e, n), q, x, y, prec)?;
        return Ok(("d/dx, a_k >= 2".into(), v.scale(x.inv())));
    }
    let pl = pole(n, e[k - 1], x);
    let g1 = if k == 1 {
        mpl_one_var(q, y, prec)?
    } else {
        let mut e2 = e[..k - 1].to_vec();
        e2[k - 2] = merge(e[k - 2], e[k - 1], n);
        mpl_two_var(&block(&a[..k - 1], &e2, n), q, x, y, prec)?
    };
    let mut a3 = a[..k - 1].to_vec();
    a3.push(b[0]);
    let mut e3 = e[..k - 1].to_vec();
    e3.push(merge(e[k - 1], f[0], n));
    let g2 = if l == 1 {
        mpl_one_var(&block(&a3, &e3, n), x * y, prec)?
    } else {
        mpl_two_var(&block(&a3, &e3, n), &block(&b[1..], &f[1..], n), x, y, prec)?
    };
    let label = format!("d/dx, a_k = 1, k {} 1, l {} 1", if k == 1 { "=" } else { ">" }, if l == 1 { "=" } else { ">" });
    Ok((label, g1.scale(pl) - g2.scale(x.inv() + pl)))
}

/// `∂/∂y` of `Li_{a,b}(ζ(x), η(y))` from its differential equation.
fn dy_rhs(p: &IndexPair, q: &IndexPair, x: Complex64, y: Complex64, prec: Precision) -> Result<(String, ApproxValue)> {
    let n = p.level;
    let (a, e, b, f) = (&p.a, &p.e, &q.a, &q.e);
    let (k, l) = (a.len(), b.len());
    if b[l - 1] >= 2 {
        let mut b2 = b.clone();
        b2[l - 1] -= 1;
        let v = mpl_two_var(p, &block(&b2, f, n), x, y, prec)?;
        return Ok(("d/dy, b_l >= 2".into(), v.scale(y.inv())));
    }
    let pl = pole(n, f[l - 1], y);
    if l == 1 {
        let mut e2 = e.clone();
        e2[k - 1] = merge(e[k - 1], f[0], n);
        let v = mpl_one_var(&block(a, &e2, n), x * y, prec)?;
        return Ok(("d/dy, b_l = 1, l = 1".into(), v.scale(pl)));
    }
    let mut f2 = f[..l - 1].to_vec();
    f2[l - 2] = merge(f[l - 2], f[l - 1], n);
    let v = mpl_two_var(p, &block(&b[..l - 1], &f2, n), x, y, prec)?;
    Ok(("d/dy, b_l = 1, l > 1".into(), v.scale(pl)))
}

/// Compares central differences of `Li_{a,b}(ζ(x), η(y))` (or of
/// `Li_a(ζ(x))` when `q` is empty) with the right-hand sides of the
/// differential equations at `(x, y)`.
pub fn ode_check(p: &IndexPair, q: &IndexPair, x: Complex64, y: Complex64, delta: f64, prec: Precision) -> Result<OdeReport> {
    if p.is_empty() {
        return Err(Error::Invalid("the first index block must be nonempty".into()));
    }
    if !(delta > 0.0 && delta < 0.1) {
        return Err(Error::Invalid(format!("step must lie in (0, 0.1), got {delta}")));
    }
    if x.norm() + 2.0 * delta >= 1.0 || y.norm() + 2.0 * delta >= 1.0 {
        return Err(Error::Invalid("the point and its stencil must lie in the unit bidisc".into()));
    }
    let mut rows = Vec::new();
    if q.is_empty() {
        let numeric = central(|v| mpl_one_var(p, v, prec), x, delta)?;
        let (label, formula) = onevar_rhs(p, x, prec)?;
        rows.push(row(format!("d/dz, {label}"), numeric, formula));
        return Ok(OdeReport { rows });
    }
    if p.level != q.level {
        return Err(Error::LevelMismatch(p.level, q.level));
    }
    let numeric = central(|v| mpl_two_var(p, q, v, y, prec), x, delta)?;
    let (label, formula) = dx_rhs(p, q, x, y, prec)?;
    rows.push(row(label, numeric, formula));
    let numeric = central(|v| mpl_two_var(p, q, x, v, prec), y, delta)?;
    let (label, formula) = dy_rhs(p, q, x, y, prec)?;
    rows.push(row(label, numeric, formula));
    Ok(OdeReport { rows })
}
