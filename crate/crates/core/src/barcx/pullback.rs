//! Pullbacks between the bar complexes of the four- and five-point spaces.
//!
//! Each geometric map induces a Hopf algebra map between the dual enveloping
//! algebras; the pullback is its transpose under the pairing. Both sides
//! are morphisms of differential graded algebras, so the pullback acts
//! letterwise on bar words.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::One;

use super::forms::{m04, m05, Space};
use super::os::dual_presentation;
use super::tensor::BarTensor;
use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, Series};
use crate::presented::{Morphism, Presentation, XfVariant};
use crate::scalar::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PullbackTag {
    /// Forgetting the fourth point: `z ↦ x`.
    P4,
    /// Forgetting the second point: `z ↦ y`.
    P2,
    /// Forgetting the third point: `z ↦ xy`.
    P3,
    /// Restriction to the divisor `y = 0`.
    I123,
    /// Restriction to the divisor `x = 1` (the `1,23,4` face).
    I1234Div,
    /// Restriction to the exceptional divisor over `(x, y) = (1, 1)`.
    I234,
    /// The `12,3,4` face.
    I1234Bar,
    /// The `1,2,34` face.
    I1_2_34,
}

pub const ALL_TAGS: [PullbackTag; 8] = [
    PullbackTag::P2,
    PullbackTag::P3,
    PullbackTag::P4,
    PullbackTag::I123,
    PullbackTag::I1234Div,
    PullbackTag::I234,
    PullbackTag::I1234Bar,
    PullbackTag::I1_2_34,
];

impl PullbackTag {
    pub fn name(self) -> &'static str {
        match self {
            PullbackTag::P2 => "p2",
            PullbackTag::P3 => "p3",
            PullbackTag::P4 => "p4",
            PullbackTag::I123 => "i123",
            PullbackTag::I1234Div => "i1234_div",
            PullbackTag::I234 => "i234",
            PullbackTag::I1234Bar => "i1234_bar",
            PullbackTag::I1_2_34 => "i1_2_34",
        }
    }

    pub fn source(self) -> Space {
        match self {
            PullbackTag::P2 | PullbackTag::P3 | PullbackTag::P4 => Space::M04N,
            _ => Space::M05Nxy,
        }
    }

    pub fn target(self) -> Space {
        match self.source() {
            Space::M04N => Space::M05Nxy,
            _ => Space::M04N,
        }
    }

    /// Level of the target space; the exceptional divisor is an uncovered line.
    pub fn target_level(self, level: u32) -> u32 {
        if self == PullbackTag::I234 {
            1
        } else {
            level
        }
    }
}

impl fmt::Display for PullbackTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PullbackTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_TAGS
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown pullback tag {s:?}")))
    }
}

/// The letter table of the pullback: row `l` lists the image of source form `l`.
pub fn form_table(tag: PullbackTag, level: u32) -> Vec<Vec<(u16, Q)>> {
    let n = level;
    let one = Q::one;
    let w0 = m04::w0();
    let w = |a: i64| m04::w(n, a);
    match tag {
        PullbackTag::P4 | PullbackTag::P2 | PullbackTag::P3 => {
            let mut t = vec![Vec::new(); n as usize + 1];
            t[w0 as usize] = match tag {
                PullbackTag::P4 => vec![(m05::dx(), one())],
                PullbackTag::P2 => vec![(m05::dy(n), one())],
                _ => vec![(m05::dx(), one()), (m05::dy(n), one())],
            };
            for a in 0..n as i64 {
                let img = match tag {
                    PullbackTag::P4 => m05::dx_at(n, a),
                    PullbackTag::P2 => m05::dy_at(n, a),
                    _ => m05::dxy_at(n, a),
                };
                t[w(a) as usize] = vec![(img, one())];
            }
            t
        }
        _ => {
            let mut t = vec![Vec::new(); 3 * n as usize + 2];
            let mut set = |l: u16, v: Vec<(u16, Q)>| t[l as usize] = v;
            match tag {
                PullbackTag::I123 => {
                    set(m05::dx(), vec![(w0, one())]);
                    for a in 0..n as i64 {
                        set(m05::dx_at(n, a), vec![(w(a), one())]);
                    }
                }
                PullbackTag::I1234Div => {
                    set(m05::dy(n), vec![(w0, one())]);
                    for a in 0..n as i64 {
                        set(m05::dy_at(n, a), vec![(w(a), one())]);
                        set(m05::dxy_at(n, a), vec![(w(a), one())]);
                    }
                }
                PullbackTag::I234 => {
                    set(m05::dx_at(n, 0), vec![(w0, one())]);
                    set(m05::dy_at(n, 0), vec![(m04::w(1, 0), one())]);
                }
                PullbackTag::I1234Bar => {
                    set(m05::dx(), vec![(w0, -one())]);
                    set(m05::dy(n), vec![(w0, one())]);
                    for a in 0..n as i64 {
                        set(m05::dy_at(n, a), vec![(w(a), one())]);
                    }
                }
                PullbackTag::I1_2_34 => {
                    set(m05::dx(), vec![(w0, one())]);
                    for a in 0..n as i64 {
                        set(m05::dx_at(n, a), vec![(w(a), one())]);
                        set(m05::dxy_at(n, a), vec![(w(a), one())]);
                    }
                }
                _ => unreachable!(),
            }
            t
        }
    }
}

/// Applies the pullback `tag^*` to a bar tensor on the source space.
pub fn pullback(tag: PullbackTag, b: &BarTensor) -> Result<BarTensor> {
    if b.space() != tag.source() {
        return Err(Error::Invalid(format!(
            "{tag} acts on {} tensors, got {}",
            tag.source(),
            b.space()
        )));
    }
    let n = b.level();
    b.map_letters(tag.target(), tag.target_level(n), &form_table(tag, n))
}

/// The Hopf algebra map dual to `tag^*`, between the free lifts.
///
/// Projections go from `U t⁰_{4,N}` to `U F_{N+1}`; embeddings go from
/// `U F_{N+1}` (or `U F_2` for the exceptional divisor) into `U t⁰_{4,N}`.
pub fn algebra_map(tag: PullbackTag, level: u32) -> Result<Morphism> {
    let t0 = dual_presentation(Space::M05Nxy, level)?;
    let free_n = dual_presentation(Space::M04N, level)?;
    let embed = |f: [Option<u32>; 4]| -> Result<Morphism> {
        let t03 = Arc::new(Presentation::build_t0(3, level)?);
        let m = Morphism::build_xf(&f, XfVariant::TnToTn, t03, t0.clone())?;
        Morphism::new(free_n.clone(), t0.clone(), m.images)
    };
    match tag {
        PullbackTag::P4 | PullbackTag::P2 | PullbackTag::P3 => {
            let alpha = free_n.alpha.clone();
            let zero = || Series::zero(&alpha, 1);
            let a = Series::letter(&alpha, 1, 0);
            let b = |x: i64| Series::letter(&alpha, 1, alpha.b(x));
            let sum_b = (0..level as i64).fold(zero(), |acc, x| acc.add(&b(x)).unwrap());
            let mut images = Vec::new();
            for l in 0..t0.alpha.len() as u16 {
                let (i, j, x) = crate::presented::braid_indices(t0.alpha.name(l))
                    .ok_or_else(|| Error::Invalid("unexpected letter".into()))?;
                // t¹⁴ is eliminated in the reduced lift, so t¹³ carries
                // the image forced by the vanishing central element.
                let img = match (tag, i, j) {
                    (PullbackTag::P4, 1, 2) => a.clone(),
                    (PullbackTag::P4, 1, 3) => a.neg().sub(&sum_b)?,
                    (PullbackTag::P4, 2, 3) => b(x),
                    (PullbackTag::P2, 1, 3) => a.clone(),
                    (PullbackTag::P2, 3, 4) => b(x),
                    (PullbackTag::P3, 1, 2) => a.clone(),
                    (PullbackTag::P3, 2, 4) => b(x),
                    _ => zero(),
                };
                images.push(img);
            }
            Morphism::new(t0.clone(), free_n.clone(), images)
        }
        PullbackTag::I123 => embed([Some(1), Some(2), Some(3), None]),
        PullbackTag::I1234Div => embed([Some(1), Some(2), Some(2), Some(3)]),
        PullbackTag::I1234Bar => embed([Some(1), Some(1), Some(2), Some(3)]),
        PullbackTag::I1_2_34 => embed([Some(1), Some(2), Some(3), Some(3)]),
        PullbackTag::I234 => {
            let plain = Arc::new(Presentation::build_t0_plain(3)?);
            let m = Morphism::build_xf(&[None, Some(1), Some(2), Some(3)], XfVariant::TToTn, plain, t0.clone())?;
            let f1 = Arc::new(Presentation::free(Alphabet::cyclotomic(1)));
            Morphism::new(f1, t0.clone(), m.images)
        }
    }
}
