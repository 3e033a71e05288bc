use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::params;
use super::pair::{AssociatorPair, Provenance};
use super::residual::{
    distribution_linear, hexagon_equations, mixed_pentagon_equation, octagon_equation,
    pentagon_equation, residual_distribution, residual_special_action, special_action_linear,
    Equation, ProductEquation, Var,
};
use crate::error::{Error, Result};
use crate::ncseries::{lyndon_basis, lyndon_bracket, Alphabet, LieSeries, Series, Word};
use crate::scalar::{q, Q};

/// How to fix unknowns left undetermined at a degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeParameterPolicy {
    /// Every free unknown is zero: the minimal, reproducible choice.
    Zero,
    /// Small pseudo-random rationals from a seeded generator.
    Seeded(u64),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub level: u32,
    pub mu: Q,
    pub a: i64,
    pub maxdeg: u32,
    pub imposed: BTreeSet<Equation>,
    pub policy: FreeParameterPolicy,
}

impl SolverConfig {
    /// Configuration with `a = 1`, zero policy, and the hexagons added
    /// whenever `μ ≠ 0` so that `g` is not forced to be trivial.
    pub fn new(level: u32, mu: Q, maxdeg: u32, imposed: &[Equation]) -> Self {
        let mut set: BTreeSet<Equation> = imposed.iter().copied().collect();
        if !mu.is_zero() {
            set.insert(Equation::Hexagons);
        }
        SolverConfig {
            level,
            mu,
            a: 1,
            maxdeg,
            imposed: set,
            policy: FreeParameterPolicy::Zero,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.level == 0 {
            return Err(Error::Invalid("N must be at least 1".into()));
        }
        if self.maxdeg == 0 {
            return Err(Error::Invalid("D must be at least 1".into()));
        }
        if self.imposed.contains(&Equation::MixedPentagon) && !self.imposed.contains(&Equation::Pentagon) {
            return Err(Error::Invalid("mixed_pentagon requires pentagon on g".into()));
        }
        if self.imposed.contains(&Equation::SpecialAction) && !self.mu.is_zero() {
            return Err(Error::Invalid("special_action is only defined for mu = 0".into()));
        }
        Ok(())
    }
}

enum Target {
    Product(ProductEquation),
    SpecialAction,
    Distribution(u32),
}

impl Target {
    fn label(&self) -> String {
        match self {
            Target::Product(p) => p.label.clone(),
            Target::SpecialAction => "special_action".into(),
            Target::Distribution(n) => format!("distribution N'={n}"),
        }
    }

    /// Degree of the residual component that is affine in degree-`d` unknowns.
    fn shift(&self) -> u32 {
        match self {
            Target::SpecialAction => 1,
            _ => 0,
        }
    }

    fn evaluate(&self, g: &Series, h: &Series, mu: &Q) -> Result<Series> {
        Ok(match self {
            Target::Product(p) => p.evaluate(g, h, mu)?.series,
            Target::SpecialAction => residual_special_action(h)?.series,
            Target::Distribution(n) => residual_distribution(h, *n)?.series,
        })
    }

    fn linear(&self, var: Var, p: &Series) -> Result<Option<Series>> {
        Ok(match (self, var) {
            (Target::Product(e), v) if e.uses(v) => Some(e.linear_part(v, p)?),
            (Target::SpecialAction, Var::H) => Some(special_action_linear(p)?),
            (Target::Distribution(n), Var::H) => Some(distribution_linear(p, *n)?),
            _ => None,
        })
    }
}

fn targets(cfg: &SolverConfig) -> Result<Vec<Target>> {
    let mut out = Vec::new();
    for e in &cfg.imposed {
        match e {
            Equation::Pentagon => out.push(Target::Product(pentagon_equation()?)),
            Equation::Hexagons => out.extend(hexagon_equations().into_iter().map(Target::Product)),
            Equation::MixedPentagon => out.push(Target::Product(mixed_pentagon_equation(cfg.level)?)),
            Equation::Octagon => out.push(Target::Product(octagon_equation(cfg.level, cfg.a))),
            Equation::SpecialAction => out.push(Target::SpecialAction),
            Equation::Distribution => {
                for np in (1..cfg.level).filter(|np| cfg.level.is_multiple_of(*np)) {
                    out.push(Target::Distribution(np));
                }
            }
        }
    }
    Ok(out)
}

/// Incremental echelon form of an affine system `M x = b`.
struct Echelon {
    ncols: usize,
    pivots: Vec<(usize, Vec<Q>, Q)>,
}

impl Echelon {
    fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: Vec::new(),
        }
    }

    /// Adds a row; `Err(())` when it reduces to `0 = nonzero`.
    fn push(&mut self, mut row: Vec<Q>, mut rhs: Q) -> std::result::Result<(), ()> {
        debug_assert_eq!(row.len(), self.ncols);
        for (col, prow, prhs) in &self.pivots {
            if row[*col].is_zero() {
                continue;
            }
            let c = row[*col].clone();
            for (x, y) in row.iter_mut().zip(prow) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
            rhs -= &c * prhs;
        }
        match row.iter().position(|x| !x.is_zero()) {
            Some(col) => {
                let inv = Q::one() / row[col].clone();
                for x in row.iter_mut() {
                    *x *= &inv;
                }
                rhs *= &inv;
                self.pivots.push((col, row, rhs));
                Ok(())
            }
            None if rhs.is_zero() => Ok(()),
            None => Err(()),
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Back substitution with some columns prescribed. Returns the values of
    /// the first `n` columns and, unless `close` is set, the null directions of
    /// the free columns among them (which are then set to zero instead of
    /// drawing from `free_value`).
    fn solve_partial(
        &self,
        fixed: &[Option<Q>],
        n: usize,
        close: bool,
        free_value: &mut dyn FnMut() -> Q,
    ) -> (Vec<Q>, Vec<Vec<Q>>) {
        let pivot_of: BTreeMap<usize, usize> =
            self.pivots.iter().enumerate().map(|(k, p)| (p.0, k)).collect();
        let free_cols: Vec<usize> = (0..n)
            .filter(|c| !pivot_of.contains_key(c) && fixed[*c].is_none())
            .collect();
        let back = |vals: &mut Vec<Q>, with_rhs: bool| {
            for (col, row, rhs) in self.pivots.iter().rev() {
                if *col >= n {
                    continue;
                }
                let mut v = if with_rhs { rhs.clone() } else { Q::zero() };
                for (c, coef) in row.iter().enumerate() {
                    if c != *col && !coef.is_zero() {
                        v -= coef * &vals[c];
                    }
                }
                vals[*col] = v;
            }
        };
        let mut x: Vec<Q> = fixed
            .iter()
            .map(|f| f.clone().unwrap_or_else(Q::zero))
            .collect();
        for &c in &free_cols {
            x[c] = if close { free_value() } else { Q::zero() };
        }
        back(&mut x, true);
        let mut dirs = Vec::new();
        if !close {
            for &c in &free_cols {
                let mut v = vec![Q::zero(); fixed.len()];
                v[c] = Q::one();
                back(&mut v, false);
                v.truncate(n);
                dirs.push(v);
            }
        }
        x.truncate(n);
        (x, dirs)
    }
}

/// Lyndon-coordinate unknowns of one degree: `log g` words, then `log h` words.
struct Unknowns {
    g: Vec<Word>,
    h: Vec<Word>,
}

impl Unknowns {
    fn new(f2: &Arc<Alphabet>, cyc: &Arc<Alphabet>, d: u32) -> Self {
        Unknowns {
            g: lyndon_basis(f2, d),
            h: lyndon_basis(cyc, d),
        }
    }

    fn len(&self) -> usize {
        self.g.len() + self.h.len()
    }

    fn write(&self, lg: &mut LieSeries<Q>, lh: &mut LieSeries<Q>, x: &[Q]) {
        for (w, v) in self.g.iter().zip(x) {
            lg.set(w.clone(), v.clone());
        }
        for (w, v) in self.h.iter().zip(&x[self.g.len()..]) {
            lh.set(w.clone(), v.clone());
        }
    }

    fn read(&self, lg: &LieSeries<Q>, lh: &LieSeries<Q>) -> Vec<Q> {
        let get = |l: &LieSeries<Q>, w: &Word| l.coords.get(w).cloned().unwrap_or_else(Q::zero);
        self.g
            .iter()
            .map(|w| get(lg, w))
            .chain(self.h.iter().map(|w| get(lh, w)))
            .collect()
    }
}

/// Free directions left at the previous degree, fixed one degree later.
struct Pending {
    unknowns: Unknowns,
    base: Vec<Q>,
    dirs: Vec<Vec<Q>>,
}

impl Pending {
    fn point(&self, s: &[Q]) -> Vec<Q> {
        let mut x = self.base.clone();
        for (si, k) in s.iter().zip(&self.dirs) {
            if si.is_zero() {
                continue;
            }
            for (xv, kv) in x.iter_mut().zip(k) {
                *xv += si * kv;
            }
        }
        x
    }
}

/// Column layout of one degree's system: Lyndon unknowns, then the pending
/// parameters `s_i`, then (when the residual can be quadratic in them) `s_i s_j`.
struct Layout {
    nl: usize,
    np: usize,
    quad: Vec<(usize, usize)>,
}

impl Layout {
    fn ncols(&self) -> usize {
        self.nl + self.np + self.quad.len()
    }
}

/// Exact degree-by-degree solution of the imposed equations.
///
/// Unknowns at degree `d` are the Lyndon coordinates of `log g` and `log h`
/// (in that order); each imposed residual is affine in them at degree `d`
/// (degree `d + 1` for the special action condition). Directions left free at
/// degree `d` are not fixed immediately: they enter the degree `d + 1` system
/// as extra parameters, because later degrees may constrain them (at degree 2
/// quadratically).
pub fn solve_degreewise(cfg: &SolverConfig) -> Result<AssociatorPair> {
    cfg.validate()?;
    let f2 = Alphabet::f2();
    let cyc = Alphabet::cyclotomic(cfg.level);
    let dmax = cfg.maxdeg;
    let targets = targets(cfg)?;
    let mut lg = LieSeries::<Q>::zero(&f2, dmax);
    let mut lh = LieSeries::<Q>::zero(&cyc, dmax);
    let mut rng = match cfg.policy {
        FreeParameterPolicy::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        FreeParameterPolicy::Zero => None,
    };
    let mut free_value = move || match rng.as_mut() {
        Some(r) => q(r.gen_range(-5..=5), r.gen_range(1..=4)),
        None => Q::zero(),
    };
    let mut pending: Option<Pending> = None;
    for d in 1..=dmax {
        let unk = Unknowns::new(&f2, &cyc, d);
        let np = pending.as_ref().map_or(0, |p| p.dirs.len());
        let quadratic = d == 2 || (d == 3 && cfg.imposed.contains(&Equation::SpecialAction));
        let layout = Layout {
            nl: unk.len(),
            np,
            quad: if quadratic && np > 0 {
                (0..np).flat_map(|i| (i..np).map(move |j| (i, j))).collect()
            } else {
                Vec::new()
            },
        };
        let ncols = layout.ncols();
        let mut ech = Echelon::new(ncols);
        let inconsistent = |label: String, ech: &Echelon| Error::InconsistentSystem {
            degree: d,
            rank: ech.rank(),
            unknowns: ncols,
            row: label,
        };
        if d == 1 {
            // c_A(h) = c_{B(0)}(h) = 0.
            for l in [0u16, cyc.b(0)] {
                let col = unk.g.len() + unk.h.iter().position(|w| w.letters() == [l]).unwrap();
                let mut row = vec![Q::zero(); ncols];
                row[col] = Q::one();
                ech.push(row, Q::zero())
                    .map_err(|_| inconsistent("normalization".into(), &ech))?;
            }
        }
        for t in &targets {
            let td = d + t.shift();
            if td > dmax {
                continue;
            }
            // Residual in degree td as a function of the pending parameters.
            let mut eval = |s: &[Q]| -> Result<Series> {
                if let Some(p) = &pending {
                    p.unknowns.write(&mut lg, &mut lh, &p.point(s));
                }
                let g = lg.to_series().with_maxdeg(td).exp()?;
                let h = lh.to_series().with_maxdeg(td).exp()?;
                t.evaluate(&g, &h, &cfg.mu)
            };
            let zero_s = vec![Q::zero(); np];
            let base = eval(&zero_s)?;
            if let Some(low) = base.valuation().filter(|&v| v < td) {
                return Err(inconsistent(
                    format!("{} has a nonzero residual in degree {low}", t.label()),
                    &ech,
                ));
            }
            let mut rows: BTreeMap<Word, (Vec<Q>, Q)> = BTreeMap::new();
            let put = |rows: &mut BTreeMap<Word, (Vec<Q>, Q)>, x: &Series, col: Option<usize>| {
                for (m, c) in x.terms() {
                    if m.len() as u32 != td {
                        continue;
                    }
                    let e = rows
                        .entry(m.clone())
                        .or_insert_with(|| (vec![Q::zero(); ncols], Q::zero()));
                    match col {
                        Some(j) => e.0[j] += c,
                        None => e.1 -= c,
                    }
                }
            };
            put(&mut rows, &base, None);
            let cols = unk
                .g
                .iter()
                .map(|w| (Var::G, &f2, w))
                .chain(unk.h.iter().map(|w| (Var::H, &cyc, w)));
            for (j, (var, alpha, w)) in cols.enumerate() {
                let p = lyndon_bracket::<Q>(alpha, td, w);
                if let Some(lin) = t.linear(var, &p)? {
                    put(&mut rows, &lin, Some(j));
                }
            }
            if np > 0 {
                let unit = |i: usize, v: i64| {
                    let mut s = zero_s.clone();
                    s[i] = Q::from_integer(v.into());
                    s
                };
                let mut plus = Vec::with_capacity(np);
                for i in 0..np {
                    let fp = eval(&unit(i, 1))?.sub(&base)?;
                    if layout.quad.is_empty() {
                        put(&mut rows, &fp, Some(layout.nl + i));
                    } else {
                        let fm = eval(&unit(i, -1))?.sub(&base)?;
                        let half = q(1, 2);
                        put(&mut rows, &fp.sub(&fm)?.scale(&half), Some(layout.nl + i));
                        let qi_col = layout.quad.iter().position(|&c| c == (i, i)).unwrap();
                        put(&mut rows, &fp.add(&fm)?.scale(&half), Some(layout.nl + np + qi_col));
                    }
                    plus.push(fp);
                }
                for (k, &(i, j)) in layout.quad.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let mut s = zero_s.clone();
                    s[i] = Q::one();
                    s[j] = Q::one();
                    let fij = eval(&s)?.sub(&base)?.sub(&plus[i])?.sub(&plus[j])?;
                    put(&mut rows, &fij, Some(layout.nl + np + k));
                }
                if let Some(p) = &pending {
                    p.unknowns.write(&mut lg, &mut lh, &p.base);
                }
            }
            for (w, (row, rhs)) in rows {
                ech.push(row, rhs).map_err(|_| {
                    let names = w.names(base.alphabet()).join(" ");
                    inconsistent(format!("{} at word [{names}]", t.label()), &ech)
                })?;
            }
        }
        let s = solve_parameters(&ech, &layout, &mut free_value)
            .map_err(|msg| inconsistent(msg, &ech))?;
        // Lyndon unknowns in terms of the chosen parameters; free ones carried forward.
        let mut fixed = vec![None; ncols];
        for (i, v) in s.iter().enumerate() {
            fixed[layout.nl + i] = Some(v.clone());
        }
        for (k, &(i, j)) in layout.quad.iter().enumerate() {
            fixed[layout.nl + np + k] = Some(&s[i] * &s[j]);
        }
        let last = d == dmax;
        let (x, dirs) = ech.solve_partial(&fixed, layout.nl, last, &mut free_value);
        log::info!(
            "degree {d}: {} unknowns, {np} carried parameters, rank {}, {} left free",
            layout.nl,
            ech.rank(),
            dirs.len()
        );
        if let Some(p) = pending.take() {
            p.unknowns.write(&mut lg, &mut lh, &p.point(&s));
        }
        unk.write(&mut lg, &mut lh, &x);
        if !dirs.is_empty() {
            pending = Some(Pending {
                base: unk.read(&lg, &lh),
                unknowns: unk,
                dirs,
            });
        }
    }
    let g = lg.to_series().exp()?;
    let h = lh.to_series().exp()?;
    for t in &targets {
        let r = t.evaluate(&g, &h, &cfg.mu)?;
        if !r.is_zero() {
            return Err(Error::InconsistentSystem {
                degree: r.valuation().unwrap_or(0),
                rank: 0,
                unknowns: 0,
                row: format!("{} does not vanish on the final pair", t.label()),
            });
        }
    }
    let mut pair = AssociatorPair::new(g, h, cfg.a, cfg.mu.clone())?;
    pair.imposed = cfg.imposed.clone();
    pair.provenance = Provenance::Solver;
    Ok(pair)
}

/// Chooses the carried parameters so that the system stays consistent.
fn solve_parameters(
    ech: &Echelon,
    layout: &Layout,
    free_value: &mut dyn FnMut() -> Q,
) -> std::result::Result<Vec<Q>, String> {
    let np = layout.np;
    if np == 0 {
        return Ok(Vec::new());
    }
    // Rows whose pivot lies past the Lyndon block constrain the parameters alone.
    let conditions: Vec<(&Vec<Q>, &Q)> = ech
        .pivots
        .iter()
        .filter(|(c, _, _)| *c >= layout.nl)
        .map(|(_, r, b)| (r, b))
        .collect();
    let polys = conditions
        .iter()
        .map(|(r, b)| {
            let mut quad = BTreeMap::new();
            for (k, x) in r[layout.nl + np..].iter().enumerate() {
                if !x.is_zero() {
                    quad.insert(layout.quad[k], x.clone());
                }
            }
            params::Poly2 {
                c: -(*b).clone(),
                lin: r[layout.nl..layout.nl + np].to_vec(),
                quad,
            }
        })
        .collect();
    params::solve(polys, np, free_value)
}
