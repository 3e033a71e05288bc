use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::cache;
use super::presentation::Presentation;
use crate::error::{Error, Result};
use crate::ncseries::{Series, Word};
use crate::scalar::{Scalar, Q};

/// Sparse row, monomials strictly descending; the first entry is the leading
/// monomial with coefficient one.
pub type Row = Vec<(u64, Q)>;

/// Echelon basis of the degree-`d` part of the two-sided ideal.
#[derive(Debug, Default)]
pub struct DegreeData {
    pub rows: Vec<Row>,
    pivots: HashMap<u64, u32>,
}

impl DegreeData {
    pub(crate) fn from_rows(rows: Vec<Row>) -> Self {
        let pivots = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r[0].0, i as u32))
            .collect();
        DegreeData { rows, pivots }
    }

    fn push(&mut self, row: Row) {
        self.pivots.insert(row[0].0, self.rows.len() as u32);
        self.rows.push(row);
    }

    /// Reduces `v` in place until its top monomial is not a pivot.
    /// Returns the resulting echelon row, or `None` when `v` lies in the span.
    fn reduce_to_row(&self, mut v: BTreeMap<u64, Q>) -> Option<Row> {
        loop {
            let (&m, _) = v.last_key_value()?;
            match self.pivots.get(&m) {
                Some(&p) => {
                    let c = v.remove(&m).unwrap();
                    subtract_row(&mut v, &c, &self.rows[p as usize][1..]);
                }
                None => {
                    let lead = v[&m].clone();
                    let inv = Q::one() / lead;
                    return Some(
                        v.into_iter()
                            .rev()
                            .map(|(k, c)| (k, c * &inv))
                            .collect(),
                    );
                }
            }
        }
    }

    /// Full reduction: the unique representative supported off the pivots.
    fn normal_form<C: Scalar>(&self, mut v: BTreeMap<u64, C>) -> BTreeMap<u64, C> {
        let mut out = BTreeMap::new();
        while let Some((m, c)) = v.pop_last() {
            match self.pivots.get(&m) {
                Some(&p) => subtract_row_generic(&mut v, &c, &self.rows[p as usize][1..]),
                None => {
                    out.insert(m, c);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, m: u64) -> bool {
        self.pivots.contains_key(&m)
    }
}

fn subtract_row(v: &mut BTreeMap<u64, Q>, c: &Q, tail: &[(u64, Q)]) {
    for (k, x) in tail {
        let e = v.entry(*k).or_insert_with(Q::zero);
        *e -= c * x;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

fn subtract_row_generic<C: Scalar>(v: &mut BTreeMap<u64, C>, c: &C, tail: &[(u64, Q)]) {
    for (k, x) in tail {
        let e = v.entry(*k).or_insert_with(C::zero);
        *e = e.clone() - c.mul_q(x);
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Truncated quotient of the free algebra by the ideal of a presentation.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub presentation: Arc<Presentation>,
    maxdeg: u32,
    degrees: Vec<Arc<DegreeData>>,
}

type Registry = Mutex<HashMap<String, Vec<Arc<DegreeData>>>>;

fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

impl QuotientAlgebra {
    /// Builds (or fetches from the in-memory and disk caches) all ideal
    /// components up to degree `maxdeg`.
    pub fn new(presentation: Arc<Presentation>, maxdeg: u32) -> Result<Self> {
        let key = presentation.hash().to_string();
        let mut degrees: Vec<Arc<DegreeData>> = registry()
            .lock()
            .unwrap()
            .get(&key)
            .map(|v| v.iter().take(maxdeg as usize + 1).cloned().collect())
            .unwrap_or_default();
        while degrees.len() <= maxdeg as usize {
            let d = degrees.len() as u32;
            let data = match cache::load(&key, presentation.alpha.len(), d) {
                Some(data) => data,
                None => {
                    let data = build_degree(&presentation, d, degrees.last().map(|a| &**a));
                    log::debug!(
                        "{}: degree {d} ideal rank {}",
                        presentation.tag,
                        data.rank()
                    );
                    cache::store(&key, presentation.alpha.len(), d, &data);
                    data
                }
            };
            degrees.push(Arc::new(data));
            let mut reg = registry().lock().unwrap();
            let slot = reg.entry(key.clone()).or_default();
            if slot.len() < degrees.len() {
                *slot = degrees.clone();
            }
        }
        Ok(QuotientAlgebra {
            presentation,
            maxdeg,
            degrees,
        })
    }

    /// Drops every in-memory echelon basis (disk files are kept).
    pub fn clear_memory_cache() {
        registry().lock().unwrap().clear();
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    fn letters(&self) -> u64 {
        self.presentation.alpha.len() as u64
    }

    pub fn free_dim(&self, d: u32) -> u64 {
        self.letters().pow(d)
    }

    /// Dimension of the quotient in degree `d`.
    pub fn dim(&self, d: u32) -> u64 {
        self.free_dim(d) - self.degrees[d as usize].rank() as u64
    }

    pub fn degree_data(&self, d: u32) -> &DegreeData {
        &self.degrees[d as usize]
    }

    /// Echelon basis of the degree-`d` part of the ideal.
    pub fn ideal_component(&self, d: u32) -> Result<Vec<Series>> {
        if d > self.maxdeg {
            return Err(Error::DegreeOverflow(d, self.maxdeg));
        }
        Ok(self.degrees[d as usize]
            .rows
            .iter()
            .map(|r| self.row_to_series(d, r))
            .collect())
    }

    /// Monomials of degree `d` outside the ideal's leading terms, increasing.
    pub fn normal_monomials(&self, d: u32) -> Vec<Word> {
        let data = &self.degrees[d as usize];
        (0..self.free_dim(d))
            .filter(|m| !data.is_pivot(*m))
            .map(|m| self.decode(d, m))
            .collect()
    }

    pub fn encode(&self, w: &Word) -> u64 {
        let n = self.letters();
        w.letters().iter().fold(0u64, |acc, &l| acc * n + l as u64)
    }

    pub fn decode(&self, d: u32, mut m: u64) -> Word {
        let n = self.letters();
        let mut v = vec![0u16; d as usize];
        for slot in v.iter_mut().rev() {
            *slot = (m % n) as u16;
            m /= n;
        }
        Word::from_slice(&v)
    }

    fn row_to_series(&self, d: u32, r: &[(u64, Q)]) -> Series {
        Series::from_terms(
            &self.presentation.alpha,
            self.maxdeg,
            r.iter().map(|(m, c)| (self.decode(d, *m), c.clone())),
        )
    }

    /// Splits a series into per-degree sparse vectors.
    fn split<C: Scalar>(&self, x: &Series<C>) -> Result<Vec<BTreeMap<u64, C>>> {
        if x.alphabet() != &self.presentation.alpha {
            return Err(Error::AlphabetMismatch(
                self.presentation.alpha.to_string(),
                x.alphabet().to_string(),
            ));
        }
        if x.maxdeg() > self.maxdeg {
            return Err(Error::DegreeOverflow(x.maxdeg(), self.maxdeg));
        }
        let mut parts = vec![BTreeMap::new(); x.maxdeg() as usize + 1];
        for (w, c) in x.terms() {
            parts[w.len()].insert(self.encode(w), c.clone());
        }
        Ok(parts)
    }

    /// Canonical representative modulo the ideal, supported on normal monomials.
    pub fn normal_form<C: Scalar>(&self, x: &Series<C>) -> Result<Series<C>> {
        let parts = self.split(x)?;
        let mut out = Series::zero(x.alphabet(), x.maxdeg());
        for (d, v) in parts.into_iter().enumerate() {
            if v.is_empty() {
                continue;
            }
            for (m, c) in self.degrees[d].normal_form(v) {
                out.add_term(self.decode(d as u32, m), c);
            }
        }
        Ok(out)
    }

    /// Normal form of one homogeneous degree as a sparse vector.
    pub fn normal_vector<C: Scalar>(&self, x: &Series<C>, d: u32) -> Result<BTreeMap<u64, C>> {
        let mut parts = self.split(x)?;
        if d as usize >= parts.len() {
            return Ok(BTreeMap::new());
        }
        let v = std::mem::take(&mut parts[d as usize]);
        Ok(self.degrees[d as usize].normal_form(v))
    }

    pub fn is_zero<C: Scalar>(&self, x: &Series<C>) -> Result<bool> {
        Ok(self.normal_form(x)?.is_zero())
    }
}

fn build_degree(p: &Presentation, d: u32, prev: Option<&DegreeData>) -> DegreeData {
    let n = p.alpha.len() as u64;
    let mut data = DegreeData::default();
    match d {
        0 | 1 => {}
        2 => {
            for r in &p.relations {
                let v: BTreeMap<u64, Q> = r
                    .terms()
                    .iter()
                    .map(|(w, c)| (w.letters()[0] as u64 * n + w.letters()[1] as u64, c.clone()))
                    .collect();
                if let Some(row) = data.reduce_to_row(v) {
                    data.push(row);
                }
            }
        }
        _ => {
            let prev = prev.expect("previous degree");
            let shift = n.pow(d - 1);
            // Left multiples of an echelon basis stay echelon with distinct leads.
            for x in 0..n {
                for r in &prev.rows {
                    data.push(r.iter().map(|(m, c)| (x * shift + m, c.clone())).collect());
                }
            }
            for r in &prev.rows {
                for x in 0..n {
                    let v: BTreeMap<u64, Q> = r.iter().map(|(m, c)| (m * n + x, c.clone())).collect();
                    if let Some(row) = data.reduce_to_row(v) {
                        data.push(row);
                    }
                }
            }
        }
    }
    data
}
