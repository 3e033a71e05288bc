//! Orlik–Solomon side: degree-two products of one-forms, the `d''`
//! obstruction, and the pairing with the dual enveloping algebras.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::forms::{m05, wn, Space};
use super::tensor::BarTensor;
use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, Series, Word};
use crate::presented::{Presentation, QuotientAlgebra};
use crate::scalar::{Scalar, Q};

type Pair = (u16, u16);
type Table = Vec<Vec<(u16, Q)>>;

/// The algebra whose (completed) enveloping algebra is dual to `H⁰` of the
/// bar complex of `space`: `U F_{N+1}`, `U t⁰_{4,N}` or `U t_{4,N}`.
pub fn dual_presentation(space: Space, level: u32) -> Result<Arc<Presentation>> {
    static CACHE: OnceLock<Mutex<HashMap<(Space, u32), Arc<Presentation>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache lock").get(&(space, level)) {
        return Ok(p.clone());
    }
    let p = Arc::new(match space {
        Space::M04N => {
            if level == 0 {
                return Err(Error::Invalid("N must be at least 1".into()));
            }
            Presentation::free(Alphabet::cyclotomic(level))
        }
        Space::M05Nxy => Presentation::build_t0(4, level)?,
        Space::WNz => Presentation::build_t(4, level)?,
    });
    cache.lock().expect("cache lock").insert((space, level), p.clone());
    Ok(p)
}

/// For each one-form, its image as a combination of dual-lift letters.
///
/// In the `(x, y)` picture the degree-one part of `Exp Ω` reads
/// `t¹²·dx + Σ t²³(a)·dx@a + (t¹² + t¹³ + t²³)·dy + Σ t³⁴(a)·dy@a + Σ t²⁴(a)·dxy@a`,
/// so a bar letter is dual to a coordinate of the element in that basis.
/// Expressing those coordinates through the lift letters gives this table.
pub(crate) fn dual_table(space: Space, level: u32) -> Result<Table> {
    let pres = dual_presentation(space, level)?;
    let n = pres.alpha.len();
    match space {
        Space::M04N | Space::WNz => Ok((0..n as u16).map(|l| vec![(l, Q::one())]).collect()),
        Space::M05Nxy => {
            let alpha = &pres.alpha;
            let t = |name: String| alpha.expect_letter(&name);
            let one = Q::one;
            let mut table = vec![Vec::new(); 3 * level as usize + 2];
            let (t12, t13) = (t("t12".into()), t("t13".into()));
            table[m05::dx() as usize] = vec![(t12, one()), (t13, -one())];
            table[m05::dy(level) as usize] = vec![(t13, one())];
            for a in 0..level as i64 {
                table[m05::dx_at(level, a) as usize] = vec![(t(format!("t23({a})")), one()), (t13, -one())];
                table[m05::dy_at(level, a) as usize] = vec![(t(format!("t34({a})")), one())];
                table[m05::dxy_at(level, a) as usize] = vec![(t(format!("t24({a})")), one())];
            }
            Ok(table)
        }
    }
}

/// Degree-two part of the Orlik–Solomon algebra, presented as the dual of
/// the quadratic relation span: the class of `α ∧ β` is the vector of
/// values of `α ⊗ β` on an echelon basis of the relations.
#[derive(Clone, Debug)]
pub struct OSAlgebra {
    pub space: Space,
    pub level: u32,
    /// Echelonized relations, written on pairs of one-forms.
    relations: Vec<BTreeMap<Pair, Q>>,
}

impl OSAlgebra {
    pub fn new(space: Space, level: u32) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(Space, u32), Arc<OSAlgebra>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(os) = cache.lock().expect("cache lock").get(&(space, level)) {
            return Ok(os.clone());
        }
        let pres = dual_presentation(space, level)?;
        let table = dual_table(space, level)?;
        let mut rows = Vec::new();
        for r in &pres.relations {
            let mut row: BTreeMap<Pair, Q> = BTreeMap::new();
            for (a, ta) in table.iter().enumerate() {
                for (b, tb) in table.iter().enumerate() {
                    let mut v = Q::zero();
                    for (j, cj) in ta {
                        for (k, ck) in tb {
                            let c = r.coeff(&Word::from_slice(&[*j, *k]));
                            if !c.is_zero() {
                                v += c * cj * ck;
                            }
                        }
                    }
                    if !v.is_zero() {
                        row.insert((a as u16, b as u16), v);
                    }
                }
            }
            rows.push(row);
        }
        let os = Arc::new(OSAlgebra {
            space,
            level,
            relations: echelonize(rows),
        });
        cache.lock().expect("cache lock").insert((space, level), os.clone());
        Ok(os)
    }

    /// Dimension of the degree-two part.
    pub fn dim2(&self) -> usize {
        self.relations.len()
    }

    /// Coordinates of `α ∧ β` in degree two.
    pub fn wedge(&self, a: u16, b: u16) -> Vec<Q> {
        self.relations
            .iter()
            .map(|r| r.get(&(a, b)).cloned().unwrap_or_else(Q::zero))
            .collect()
    }

    /// The relations as elements of `V ⊗ V` on one-forms (echelon basis).
    pub fn relation_rows(&self) -> &[BTreeMap<Pair, Q>] {
        &self.relations
    }
}

fn echelonize(rows: Vec<BTreeMap<Pair, Q>>) -> Vec<BTreeMap<Pair, Q>> {
    let mut basis: Vec<BTreeMap<Pair, Q>> = Vec::new();
    for mut row in rows {
        for b in &basis {
            let (pivot, pc) = b.iter().next().expect("nonzero row");
            if let Some(c) = row.get(pivot).cloned() {
                let f = c / pc;
                for (k, v) in b {
                    let e = row.entry(*k).or_insert_with(Q::zero);
                    *e -= &f * v;
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
        if let Some((_, pc)) = row.iter().next() {
            let inv = pc.recip();
            for v in row.values_mut() {
                *v *= &inv;
            }
            for b in basis.iter_mut() {
                let pivot = *row.keys().next().expect("nonzero row");
                if let Some(c) = b.get(&pivot).cloned() {
                    for (k, v) in &row {
                        let e = b.entry(*k).or_insert_with(Q::zero);
                        *e -= &c * v;
                    }
                    b.retain(|_, v| !v.is_zero());
                }
            }
            basis.push(row);
        }
    }
    basis.sort_by(|a, b| a.keys().next().cmp(&b.keys().next()));
    basis
}

/// `d''` of a bar tensor, with each adjacent product `α_i ∧ α_{i+1}` written
/// in the degree-two basis: keys are `(prefix, basis index, suffix)`.
#[derive(Clone, Debug, PartialEq)]
pub struct D2Residual {
    pub entries: BTreeMap<(Word, usize, Word), Q>,
}

impl D2Residual {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Zero exactly when `b` is a degree-zero cocycle of the bar complex.
pub fn d2_residual(b: &BarTensor) -> Result<D2Residual> {
    let os = OSAlgebra::new(b.space(), b.level())?;
    let mut entries: BTreeMap<(Word, usize, Word), Q> = BTreeMap::new();
    for (w, c) in b.terms() {
        let l = w.letters();
        for i in 0..l.len().saturating_sub(1) {
            for (j, v) in os.wedge(l[i], l[i + 1]).into_iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let key = (Word::from_slice(&l[..i]), j, Word::from_slice(&l[i + 2..]));
                *entries.entry(key).or_insert_with(Q::zero) += v * c;
            }
        }
    }
    entries.retain(|_, v| !v.is_zero());
    Ok(D2Residual { entries })
}

/// Result of certifying a bar tensor as a well-defined functional on the
/// quotient algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub cocycle: bool,
    pub annihilates_ideal: bool,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.cocycle && self.annihilates_ideal
    }
}

/// Checks `d'' b = 0` and, independently, that `b` vanishes on every
/// degree component of the relation ideal up to the length of `b`.
pub fn certify(b: &BarTensor) -> Result<Certificate> {
    let cocycle = d2_residual(b)?.is_zero();
    let maxlen = b.max_length().unwrap_or(0);
    let pres = dual_presentation(b.space(), b.level())?;
    let mut annihilates_ideal = true;
    if maxlen >= 2 && !pres.relations.is_empty() {
        let quot = QuotientAlgebra::new(pres, maxlen)?;
        let dual = dual_words(b)?;
        'outer: for d in 2..=maxlen {
            for r in quot.ideal_component(d)? {
                let v: Q = dual.iter().map(|(w, c)| c * r.coeff(w)).sum();
                if !v.is_zero() {
                    annihilates_ideal = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(Certificate {
        cocycle,
        annihilates_ideal,
    })
}

/// `b` rewritten letterwise on the dual-lift letters.
pub(crate) fn dual_words(b: &BarTensor) -> Result<BTreeMap<Word, Q>> {
    Ok(b.map_words(&dual_table(b.space(), b.level())?))
}

/// The pairing `⟨b, φ⟩` of the identification `H⁰B ≅ (U g)^*`.
///
/// `φ` lives in the free lift of the dual algebra. For the five-point
/// spaces `b` must be a cocycle, which makes the value independent of the
/// lift; otherwise an error is returned.
pub fn pair<C: Scalar>(b: &BarTensor, phi: &Series<C>) -> Result<C> {
    if b.space() != Space::M04N && !d2_residual(b)?.is_zero() {
        return Err(Error::Precondition(
            "bar tensor is not a cocycle; its pairing depends on the lift".into(),
        ));
    }
    pair_on_lift(b, phi)
}

/// The pairing computed on the given lift, without the cocycle check.
pub fn pair_on_lift<C: Scalar>(b: &BarTensor, phi: &Series<C>) -> Result<C> {
    let pres = dual_presentation(b.space(), b.level())?;
    if phi.alphabet() != &pres.alpha {
        return Err(Error::AlphabetMismatch(pres.alpha.to_string(), phi.alphabet().to_string()));
    }
    if let Some(l) = b.max_length() {
        if l > phi.maxdeg() {
            return Err(Error::DegreeOverflow(l, phi.maxdeg()));
        }
    }
    let mut acc = C::zero();
    for (w, c) in dual_words(b)? {
        let v = phi.coeff(&w);
        acc = acc + v.mul_q(&c);
    }
    Ok(acc)
}

/// Pullback along `W_N → M05N`, `(z₂, z₃, z₄) ↦ (z₂/z₃, z₃/z₄)`.
pub fn xy_to_z(b: &BarTensor) -> Result<BarTensor> {
    if b.space() != Space::M05Nxy {
        return Err(Error::Invalid(format!("expected an M05N-xy tensor, got {}", b.space())));
    }
    let n = b.level();
    let one = Q::one;
    let w14 = wn::w1(4);
    let w13 = wn::w1(3);
    let mut table = vec![Vec::new(); 3 * n as usize + 2];
    table[m05::dx() as usize] = vec![(wn::w1(2), one()), (w13, -one())];
    table[m05::dy(n) as usize] = vec![(w13, one()), (w14, -one())];
    for a in 0..n as i64 {
        table[m05::dx_at(n, a) as usize] = vec![(wn::wij(n, 2, 3, a), one()), (w13, -one())];
        table[m05::dy_at(n, a) as usize] = vec![(wn::wij(n, 3, 4, a), one()), (w14, -one())];
        table[m05::dxy_at(n, a) as usize] = vec![(wn::wij(n, 2, 4, a), one()), (w14, -one())];
    }
    b.map_letters(Space::WNz, n, &table)
}

/// Restriction to the slice `z₄ = 1`, `(x, y) ↦ (xy, y, 1)`; a left inverse
/// of [`xy_to_z`].
pub fn z_to_xy(b: &BarTensor) -> Result<BarTensor> {
    if b.space() != Space::WNz {
        return Err(Error::Invalid(format!("expected a WN-z tensor, got {}", b.space())));
    }
    let n = b.level();
    let one = Q::one;
    let mut table = vec![Vec::new(); 3 * n as usize + 3];
    table[wn::w1(2) as usize] = vec![(m05::dx(), one()), (m05::dy(n), one())];
    table[wn::w1(3) as usize] = vec![(m05::dy(n), one())];
    for a in 0..n as i64 {
        table[wn::wij(n, 2, 3, a) as usize] = vec![(m05::dx_at(n, a), one()), (m05::dy(n), one())];
        table[wn::wij(n, 2, 4, a) as usize] = vec![(m05::dxy_at(n, a), one())];
        table[wn::wij(n, 3, 4, a) as usize] = vec![(m05::dy_at(n, a), one())];
    }
    b.map_letters(Space::M05Nxy, n, &table)
}
