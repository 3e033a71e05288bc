//! Exact solution of the small polynomial systems (degree at most two) that
//! constrain parameters carried from one degree to the next.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::scalar::Q;

/// `c + Σ lin_i s_i + Σ_{i<=j} quad_{ij} s_i s_j`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Poly2 {
    pub c: Q,
    pub lin: Vec<Q>,
    pub quad: BTreeMap<(usize, usize), Q>,
}

/// `s_p = c + Σ lin_k s_k`, never referring to `s_p` itself.
#[derive(Clone, Debug)]
struct Affine {
    var: usize,
    c: Q,
    lin: Vec<Q>,
}

impl Poly2 {
    fn is_constant(&self) -> bool {
        self.quad.values().all(Zero::is_zero) && self.lin.iter().all(Zero::is_zero)
    }

    fn is_linear(&self) -> bool {
        self.quad.values().all(Zero::is_zero)
    }

    fn substitute(&self, a: &Affine) -> Poly2 {
        let n = self.lin.len();
        let mut out = Poly2 {
            c: self.c.clone(),
            lin: self.lin.clone(),
            quad: BTreeMap::new(),
        };
        let p = a.var;
        let lp = std::mem::replace(&mut out.lin[p], Q::zero());
        if !lp.is_zero() {
            out.c += &lp * &a.c;
            for k in 0..n {
                out.lin[k] += &lp * &a.lin[k];
            }
        }
        let mut add_quad = |i: usize, j: usize, v: Q| {
            if v.is_zero() {
                return;
            }
            let key = (i.min(j), i.max(j));
            *out.quad.entry(key).or_insert_with(Q::zero) += v;
        };
        for (&(i, j), v) in &self.quad {
            match (i == p, j == p) {
                (false, false) => add_quad(i, j, v.clone()),
                (true, true) => {
                    // (c + Σ l_k s_k)^2
                    out.c += v * &a.c * &a.c;
                    for k in 0..n {
                        out.lin[k] += v * Q::from_integer(2.into()) * &a.c * &a.lin[k];
                        for m in k..n {
                            let coef = if k == m {
                                &a.lin[k] * &a.lin[k]
                            } else {
                                Q::from_integer(2.into()) * &a.lin[k] * &a.lin[m]
                            };
                            add_quad(k, m, v * coef);
                        }
                    }
                }
                _ => {
                    let other = if i == p { j } else { i };
                    out.lin[other] += v * &a.c;
                    for k in 0..n {
                        add_quad(other, k, v * &a.lin[k]);
                    }
                }
            }
        }
        out.quad.retain(|_, v| !v.is_zero());
        out
    }

    fn eval(&self, s: &[Q]) -> Q {
        let mut v = self.c.clone();
        for (l, x) in self.lin.iter().zip(s) {
            v += l * x;
        }
        for (&(i, j), q) in &self.quad {
            v += q * &s[i] * &s[j];
        }
        v
    }
}

fn q_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n: BigInt = x.numer().sqrt();
    let d: BigInt = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

/// Writes `quad` as `λ ℓ²` for a linear form `ℓ` with leading coefficient one.
fn rank_one(quad: &BTreeMap<(usize, usize), Q>, n: usize) -> Option<(Q, Vec<Q>)> {
    let get = |i: usize, j: usize| quad.get(&(i.min(j), i.max(j))).cloned().unwrap_or_else(Q::zero);
    let i = (0..n).find(|&i| !get(i, i).is_zero())?;
    let lambda = get(i, i);
    let two = Q::from_integer(2.into());
    let ell: Vec<Q> = (0..n)
        .map(|j| if j == i { Q::from_integer(1.into()) } else { get(i, j) / (&two * &lambda) })
        .collect();
    for a in 0..n {
        for b in a..n {
            let expect = if a == b {
                &lambda * &ell[a] * &ell[a]
            } else {
                &two * &lambda * &ell[a] * &ell[b]
            };
            if expect != get(a, b) {
                return None;
            }
        }
    }
    Some((lambda, ell))
}

/// Finds rational `s` with every condition zero, or explains why it cannot.
pub(crate) fn solve(
    mut conds: Vec<Poly2>,
    n: usize,
    free_value: &mut dyn FnMut() -> Q,
) -> Result<Vec<Q>, String> {
    let original = conds.clone();
    let mut subs: Vec<Affine> = Vec::new();
    loop {
        conds.retain(|p| !(p.is_constant() && p.c.is_zero()));
        if conds.iter().any(|p| p.is_constant()) {
            return Err("parameter conditions are inconsistent".into());
        }
        let Some(k) = conds.iter().position(|p| p.is_linear()).or_else(|| {
            // Turn a rank-one quadratic condition into a linear one.
            (!conds.is_empty()).then_some(usize::MAX)
        }) else {
            break;
        };
        let linear = if k != usize::MAX {
            conds.remove(k)
        } else {
            let p = &conds[0];
            let (lambda, ell) = rank_one(&p.quad, n)
                .ok_or_else(|| "quadratic condition of rank above one".to_string())?;
            let lead = ell.iter().position(|x| !x.is_zero()).unwrap();
            let alpha = &p.lin[lead];
            if p.lin.iter().zip(&ell).any(|(l, e)| *l != alpha * e) {
                return Err("quadratic condition mixes independent linear terms".into());
            }
            // λ t² + α t + c = 0 for t = ℓ(s).
            let disc = alpha * alpha - Q::from_integer(4.into()) * &lambda * &p.c;
            let root = q_sqrt(&disc).ok_or_else(|| "irrational parameter values".to_string())?;
            let two_l = Q::from_integer(2.into()) * &lambda;
            let t1 = (-alpha.clone() - &root) / &two_l;
            let t2 = (-alpha.clone() + &root) / &two_l;
            let t = if t1 < t2 { t1 } else { t2 };
            Poly2 {
                c: -t,
                lin: ell,
                quad: BTreeMap::new(),
            }
        };
        let var = linear.lin.iter().position(|x| !x.is_zero()).unwrap();
        let inv = Q::from_integer(1.into()) / linear.lin[var].clone();
        let a = Affine {
            var,
            c: -&linear.c * &inv,
            lin: linear
                .lin
                .iter()
                .enumerate()
                .map(|(k, x)| if k == var { Q::zero() } else { -x * &inv })
                .collect(),
        };
        conds = conds.iter().map(|p| p.substitute(&a)).collect();
        subs = subs.iter().map(|s| substitute_affine(s, &a)).collect();
        subs.push(a);
    }
    let bound: Vec<usize> = subs.iter().map(|a| a.var).collect();
    let mut s: Vec<Q> = (0..n)
        .map(|i| if bound.contains(&i) { Q::zero() } else { free_value() })
        .collect();
    for a in &subs {
        let mut v = a.c.clone();
        for (k, l) in a.lin.iter().enumerate() {
            v += l * &s[k];
        }
        s[a.var] = v;
    }
    if original.iter().any(|p| !p.eval(&s).is_zero()) {
        return Err("parameter elimination failed to verify".into());
    }
    Ok(s)
}

/// Rewrites `s` after eliminating `a.var`.
fn substitute_affine(s: &Affine, a: &Affine) -> Affine {
    let w = s.lin[a.var].clone();
    if w.is_zero() {
        return s.clone();
    }
    let mut out = s.clone();
    out.lin[a.var] = Q::zero();
    out.c += &w * &a.c;
    for (k, l) in a.lin.iter().enumerate() {
        out.lin[k] += &w * l;
    }
    out
}
