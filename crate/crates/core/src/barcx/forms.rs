use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, AlphabetKind};

/// Which space a one-form lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    /// The punctured line `z^N ≠ 0, 1, ∞`.
    #[serde(rename = "M04N")]
    M04N,
    /// The Kummer cover of the five-point space in `(x, y)` coordinates.
    #[serde(rename = "M05N-xy")]
    M05Nxy,
    /// The arrangement complement `W_N` in the `z_i` coordinates.
    #[serde(rename = "WN-z")]
    WNz,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::M04N => "M04N",
            Space::M05Nxy => "M05N-xy",
            Space::WNz => "WN-z",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M04N" => Ok(Space::M04N),
            "M05N-xy" => Ok(Space::M05Nxy),
            "WN-z" => Ok(Space::WNz),
            _ => Err(Error::Invalid(format!("unknown space {s:?}"))),
        }
    }
}

/// Symbols of the logarithmic one-forms on a space, in a fixed order.
///
/// * `M04N`: `w0 = dlog z`, `w@a = dlog(z − ζ^a)`; aligned with `A, B0, ...`.
/// * `M05N-xy`: `dx = dlog x`, `dx@a = dlog(x − ζ^a)`, `dy`, `dy@a`,
///   `dxy@a = dlog(xy − ζ^a)`; `3N + 2` forms.
/// * `WN-z`: `w1j = dlog z_j`, `wij@a = dlog(z_i − ζ^a z_j)`.
pub fn symbols(space: Space, level: u32) -> Vec<String> {
    let at = |head: &'static str| (0..level).map(move |a| format!("{head}@{a}"));
    match space {
        Space::M04N => std::iter::once("w0".to_string()).chain(at("w")).collect(),
        Space::M05Nxy => std::iter::once("dx".to_string())
            .chain(at("dx"))
            .chain(std::iter::once("dy".to_string()))
            .chain(at("dy"))
            .chain(at("dxy"))
            .collect(),
        Space::WNz => ["w12", "w13", "w14"]
            .iter()
            .map(|s| s.to_string())
            .chain(at("w23"))
            .chain(at("w24"))
            .chain(at("w34"))
            .collect(),
    }
}

/// The alphabet whose letters are the one-forms of `space`.
pub fn form_alphabet(space: Space, level: u32) -> Result<Arc<Alphabet>> {
    if level == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    let letters = symbols(space, level);
    let degrees = vec![1; letters.len()];
    Alphabet::new(AlphabetKind::Custom, level, letters, degrees)
}

/// A single one-form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneForm {
    pub space: Space,
    pub level: u32,
    pub letter: u16,
}

impl OneForm {
    pub fn parse(space: Space, level: u32, symbol: &str) -> Result<Self> {
        let letter = symbols(space, level)
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::Invalid(format!("{symbol:?} is not a one-form of {space} at N = {level}")))?;
        Ok(OneForm {
            space,
            level,
            letter: letter as u16,
        })
    }

    pub fn symbol(&self) -> String {
        symbols(self.space, self.level)[self.letter as usize].clone()
    }
}

fn at(level: u32, a: i64) -> u16 {
    a.rem_euclid(level as i64) as u16
}

/// Letter indices of the `M04N` forms.
pub mod m04 {
    use super::at;
    pub fn w0() -> u16 {
        0
    }
    pub fn w(level: u32, a: i64) -> u16 {
        1 + at(level, a)
    }
}

/// Letter indices of the `M05N-xy` forms.
pub mod m05 {
    use super::at;
    pub fn dx() -> u16 {
        0
    }
    pub fn dx_at(level: u32, a: i64) -> u16 {
        1 + at(level, a)
    }
    pub fn dy(level: u32) -> u16 {
        1 + level as u16
    }
    pub fn dy_at(level: u32, a: i64) -> u16 {
        2 + level as u16 + at(level, a)
    }
    pub fn dxy_at(level: u32, a: i64) -> u16 {
        2 + 2 * level as u16 + at(level, a)
    }
}

/// Letter indices of the `WN-z` forms.
pub mod wn {
    use super::at;
    /// `dlog z_j`, `j ∈ {2, 3, 4}`.
    pub fn w1(j: u32) -> u16 {
        (j - 2) as u16
    }
    /// `dlog(z_i − ζ^a z_j)` for `2 ≤ i < j ≤ 4`.
    pub fn wij(level: u32, i: u32, j: u32, a: i64) -> u16 {
        let block = match (i, j) {
            (2, 3) => 0,
            (2, 4) => 1,
            (3, 4) => 2,
            _ => panic!("no form w{i}{j}"),
        };
        3 + block * level as u16 + at(level, a)
    }
}
