use std::sync::Arc;


use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, AlphabetKind, Series, Tensor2, Word};
use crate::scalar::{q, Scalar};

fn check_cyclotomic<C: Scalar>(h: &Series<C>) -> Result<()> {
    let level = h.alphabet().level;
    if h.alphabet() != &Alphabet::cyclotomic(level) {
        return Err(Error::AlphabetMismatch(
            Alphabet::cyclotomic(level).to_string(),
            h.alphabet().to_string(),
        ));
    }
    Ok(())
}

fn check_y<C: Scalar>(y: &Series<C>) -> Result<()> {
    if y.alphabet().kind != AlphabetKind::Y {
        return Err(Error::AlphabetMismatch("Y".into(), y.alphabet().to_string()));
    }
    Ok(())
}

/// Kills words ending in `A` and sends `A^{n_m-1}B(a_m) ... A^{n_1-1}B(a_1)` to
/// `(-1)^m Y_{n_m,-a_m} Y_{n_{m-1},a_m-a_{m-1}} ... Y_{n_1,a_2-a_1}`.
pub fn pi_y<C: Scalar>(h: &Series<C>) -> Result<Series<C>> {
    check_cyclotomic(h)?;
    let src = h.alphabet();
    let y = Alphabet::y(src.level, h.maxdeg());
    let mut out = Series::zero(&y, h.maxdeg());
    for (w, c) in h.terms() {
        if w.letters().last() == Some(&0) {
            continue;
        }
        let mut img = Word::empty();
        let mut run = 1u32;
        let mut prev: Option<i64> = None;
        for &l in w.letters() {
            if l == 0 {
                run += 1;
                continue;
            }
            let a = (l - 1) as i64;
            let shift = match prev {
                None => -a,
                Some(p) => p - a,
            };
            img.0.push(y.y_letter(run, shift).expect("weight within truncation"));
            prev = Some(a);
            run = 1;
        }
        let c = if img.len() % 2 == 1 { -c.clone() } else { c.clone() };
        out.add_term(img, c);
    }
    Ok(out)
}

/// The algebra map `Y_{m,a} ↦ -A^{m-1} B(-a)`.
pub fn embed_y<C: Scalar>(y: &Series<C>) -> Result<Series<C>> {
    check_y(y)?;
    let ya = y.alphabet();
    let tgt = Alphabet::cyclotomic(ya.level);
    let mut out = Series::zero(&tgt, y.maxdeg());
    for (w, c) in y.terms() {
        let mut img = Word::empty();
        for &l in w.letters() {
            let (m, a) = ya.y_index(l);
            img.0.extend(std::iter::repeat_n(0, m as usize - 1));
            img.0.push(tgt.b(-(a as i64)));
        }
        let c = if w.len() % 2 == 1 { -c.clone() } else { c.clone() };
        out.add_term(img, c);
    }
    Ok(out)
}

/// `Δ_*`: the algebra morphism with
/// `Δ_*(Y_{n,a}) = Σ_{k+l=n, b+c=a} Y_{k,b} ⊗ Y_{l,c}` and `Y_{0,a} = δ_{a,0}`.
pub fn delta_star<C: Scalar>(y: &Series<C>) -> Result<Tensor2<C>> {
    check_y(y)?;
    let alpha = y.alphabet();
    let n = alpha.level as i64;
    let letter_terms = |l: u16| -> Vec<(Option<u16>, Option<u16>)> {
        let (w, a) = alpha.y_index(l);
        let mut v = vec![(Some(l), None), (None, Some(l))];
        for k in 1..w {
            for b in 0..n {
                let left = alpha.y_letter(k, b).unwrap();
                let right = alpha.y_letter(w - k, a as i64 - b).unwrap();
                v.push((Some(left), Some(right)));
            }
        }
        v
    };
    let mut out = Tensor2::zero(alpha, y.maxdeg());
    for (w, c) in y.terms() {
        let mut partial: Vec<(Word, Word)> = vec![(Word::empty(), Word::empty())];
        for &l in w.letters() {
            let terms = letter_terms(l);
            partial = partial
                .iter()
                .flat_map(|(u, v)| {
                    terms.iter().map(move |(x, z)| {
                        let mut u = u.clone();
                        let mut v = v.clone();
                        u.0.extend(*x);
                        v.0.extend(*z);
                        (u, v)
                    })
                })
                .collect();
        }
        for (u, v) in partial {
            out.add_term(u, v, c.clone());
        }
    }
    Ok(out)
}

/// `exp(Σ_{n>=1} (-1)^n/n · c_{A^{n-1}B(0)}(h) · Y_{1,0}^n)`.
pub fn h_corr<C: Scalar>(h: &Series<C>) -> Result<Series<C>> {
    check_cyclotomic(h)?;
    let d = h.maxdeg();
    let y = Alphabet::y(h.alphabet().level, d);
    let y10 = y.y_letter(1, 0).unwrap();
    let b0 = h.alphabet().b(0);
    let mut arg = Series::zero(&y, d);
    for n in 1..=d {
        let mut w = Word::from_slice(&vec![0; n as usize - 1]);
        w.0.push(b0);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let c = h.coeff(&w).mul_q(&q(sign, n as i64));
        arg.add_term(Word::from_slice(&vec![y10; n as usize]), c);
    }
    arg.exp()
}

/// `h_* = h_corr · π_Y(h)`.
pub fn h_star<C: Scalar>(h: &Series<C>) -> Result<Series<C>> {
    h_corr(h)?.concat_mul(&pi_y(h)?)
}

/// `Δ_*(h_*) − h_* ⊗ h_*` up to total weight `D`.
#[derive(Clone, Debug)]
pub struct DoubleShuffleResidual<C: Scalar> {
    pub tensor: Tensor2<C>,
}

impl<C: Scalar> DoubleShuffleResidual<C> {
    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }

    pub fn max_abs(&self) -> f64 {
        self.tensor.max_magnitude()
    }

    /// Largest coefficient per total weight `0..=D`.
    pub fn per_weight_max(&self) -> Vec<f64> {
        let alpha: Arc<Alphabet> = self.tensor.alphabet().clone();
        let mut out = vec![0.0f64; self.tensor.maxdeg() as usize + 1];
        for ((u, v), c) in self.tensor.terms() {
            let w = (u.degree(&alpha) + v.degree(&alpha)) as usize;
            out[w] = out[w].max(c.magnitude());
        }
        out
    }
}

/// Residual of the generalized double shuffle relation `Δ_*(h_*) = h_* ⊗ h_*`.
pub fn residual_double_shuffle<C: Scalar>(h: &Series<C>) -> Result<DoubleShuffleResidual<C>> {
    check_cyclotomic(h)?;
    let al = h.alphabet();
    for w in [Word::single(0), Word::single(al.b(0))] {
        if h.coeff(&w).magnitude() > 1e-12 {
            return Err(Error::Precondition(format!(
                "coefficient of {} must vanish",
                w.display(al)
            )));
        }
    }
    if (h.constant() - C::one()).magnitude() > 1e-12 {
        return Err(Error::Precondition("constant term must be 1".into()));
    }
    let hs = h_star(h)?;
    let lhs = delta_star(&hs)?;
    let rhs = Tensor2::tensor(&hs, &hs)?;
    Ok(DoubleShuffleResidual {
        tensor: lhs.sub(&rhs)?,
    })
}
