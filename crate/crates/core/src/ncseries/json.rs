use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::alphabet::Alphabet;
use super::series::Series;
use super::word::Word;
use crate::error::{Error, Result};
use crate::scalar::{format_q, parse_q, Q};

#[derive(Serialize, Deserialize)]
struct TermDoc {
    word: Vec<String>,
    coeff: String,
}

#[derive(Serialize)]
struct SeriesDoc<'a> {
    alphabet: &'a Alphabet,
    maxdeg: u32,
    terms: Vec<TermDoc>,
}

impl Series<Q> {
    /// Terms in degree-lexicographic order.
    pub fn deglex_terms(&self) -> Vec<(&Word, &Q)> {
        let alpha = self.alphabet();
        let mut v: Vec<_> = self.terms().iter().collect();
        v.sort_by(|a, b| {
            (a.0.degree(alpha), a.0).cmp(&(b.0.degree(alpha), b.0))
        });
        v
    }

    pub fn to_json_value(&self) -> Value {
        let doc = SeriesDoc {
            alphabet: self.alphabet(),
            maxdeg: self.maxdeg(),
            terms: self
                .deglex_terms()
                .into_iter()
                .map(|(w, c)| TermDoc {
                    word: w.names(self.alphabet()),
                    coeff: format_q(c),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let alpha_v = v.get("alphabet").ok_or_else(|| Error::parse("alphabet", "missing"))?;
        let alpha: Alphabet = serde_json::from_value(alpha_v.clone())
            .map_err(|e| Error::parse("alphabet", e.to_string()))?;
        let alpha: Arc<Alphabet> = alpha
            .validated()
            .map_err(|e| Error::parse("alphabet", e.to_string()))?;
        let maxdeg = v
            .get("maxdeg")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("maxdeg", "expected a non-negative integer"))?
            as u32;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("terms", "expected an array"))?;
        let mut s = Series::zero(&alpha, maxdeg);
        for (i, t) in terms.iter().enumerate() {
            let word = t
                .get("word")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(format!("terms[{i}].word"), "expected an array"))?;
            let mut w = Word::empty();
            for (j, l) in word.iter().enumerate() {
                let name = l
                    .as_str()
                    .ok_or_else(|| Error::parse(format!("terms[{i}].word[{j}]"), "expected a string"))?;
                let idx = alpha.letter(name).ok_or_else(|| {
                    Error::parse(format!("terms[{i}].word[{j}]"), format!("unknown letter {name:?}"))
                })?;
                w.0.push(idx);
            }
            if w.degree(&alpha) > maxdeg {
                return Err(Error::parse(format!("terms[{i}].word"), "degree exceeds maxdeg"));
            }
            let cs = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::parse(format!("terms[{i}].coeff"), "expected a string"))?;
            let c = parse_q(cs).map_err(|e| Error::parse(format!("terms[{i}].coeff"), e.to_string()))?;
            s.add_term(w, c);
        }
        Ok(s)
    }
}
