use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::residual::Equation;
use crate::error::{Error, Result};
use crate::ncseries::{Alphabet, Series};
use crate::scalar::{format_q, parse_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Solver,
    Imported,
    Numeric,
}

/// Candidate pair `(g, h)` with `g` on `A, B` and `h` on `A, B(0..N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AssociatorPair {
    pub g: Series,
    pub h: Series,
    pub level: u32,
    pub a: i64,
    pub mu: Q,
    pub maxdeg: u32,
    pub imposed: BTreeSet<Equation>,
    pub provenance: Provenance,
}

impl AssociatorPair {
    pub fn new(g: Series, h: Series, a: i64, mu: Q) -> Result<Self> {
        if g.alphabet() != &Alphabet::f2() {
            return Err(Error::AlphabetMismatch("F2".into(), g.alphabet().to_string()));
        }
        let level = h.alphabet().level;
        if h.alphabet() != &Alphabet::cyclotomic(level) {
            return Err(Error::AlphabetMismatch(
                Alphabet::cyclotomic(level).to_string(),
                h.alphabet().to_string(),
            ));
        }
        if g.maxdeg() != h.maxdeg() {
            return Err(Error::TruncationMismatch(g.maxdeg(), h.maxdeg()));
        }
        let maxdeg = g.maxdeg();
        Ok(AssociatorPair {
            g,
            h,
            level,
            a: a.rem_euclid(level as i64),
            mu,
            maxdeg,
            imposed: BTreeSet::new(),
            provenance: Provenance::Imported,
        })
    }

    pub fn h_alphabet(&self) -> Arc<Alphabet> {
        self.h.alphabet().clone()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "N": self.level,
            "a": self.a,
            "mu": format_q(&self.mu),
            "D": self.maxdeg,
            "imposed": self.imposed.iter().map(|e| e.name()).collect::<Vec<_>>(),
            "provenance": self.provenance,
            "g": self.g.to_json_value(),
            "h": self.h.to_json_value(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::parse(k, "missing"));
        let sub = |k: &str, e: Error| match e {
            Error::Parse { location, message } => Error::parse(format!("{k}.{location}"), message),
            other => other,
        };
        let g = Series::from_json_value(field("g")?).map_err(|e| sub("g", e))?;
        let h = Series::from_json_value(field("h")?).map_err(|e| sub("h", e))?;
        let a = field("a")?
            .as_i64()
            .ok_or_else(|| Error::parse("a", "expected an integer"))?;
        let mu = parse_q(
            field("mu")?
                .as_str()
                .ok_or_else(|| Error::parse("mu", "expected a rational string"))?,
        )
        .map_err(|e| sub("mu", e))?;
        let mut pair = AssociatorPair::new(g, h, a, mu)?;
        if let Some(n) = v.get("N").and_then(Value::as_u64) {
            if n as u32 != pair.level {
                return Err(Error::LevelMismatch(n as u32, pair.level));
            }
        }
        if let Some(d) = v.get("D").and_then(Value::as_u64) {
            if d as u32 != pair.maxdeg {
                return Err(Error::TruncationMismatch(d as u32, pair.maxdeg));
            }
        }
        if let Some(list) = v.get("imposed").and_then(Value::as_array) {
            for (i, e) in list.iter().enumerate() {
                let s = e
                    .as_str()
                    .ok_or_else(|| Error::parse(format!("imposed[{i}]"), "expected a string"))?;
                pair.imposed.insert(Equation::parse(s)?);
            }
        }
        if let Some(p) = v.get("provenance") {
            pair.provenance = serde_json::from_value(p.clone())
                .map_err(|e| Error::parse("provenance", e.to_string()))?;
        }
        Ok(pair)
    }
}
