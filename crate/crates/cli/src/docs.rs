//! Artifact documents: associator pairs, series and bar tensors, each tagged
//! with the schema version and a kind.

use std::path::Path;

use penta_core::barcx::BarTensor;
use penta_core::equations::AssociatorPair;
use penta_core::ncseries::Series;
use serde_json::Value;

use crate::report::{invalid, Failure, Outcome, SCHEMA};

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Pair(AssociatorPair),
    Series(Series),
    Bar(BarTensor),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Pair(_) => "associator_pair",
            Document::Series(_) => "series",
            Document::Bar(_) => "bar_tensor",
        }
    }

    fn body(&self) -> Value {
        match self {
            Document::Pair(p) => p.to_json_value(),
            Document::Series(s) => s.to_json_value(),
            Document::Bar(b) => b.to_json_value(),
        }
    }

    /// Canonical text: pretty JSON with the schema header and a final newline.
    pub fn render(&self) -> String {
        let mut v = self.body();
        let obj = v.as_object_mut().expect("documents are objects");
        obj.insert("schema".into(), Value::from(SCHEMA));
        obj.insert("kind".into(), Value::from(self.kind()));
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Outcome<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Failure::Validation(format!("parse error at line {} column {}: {e}", e.line(), e.column()))
        })?;
        if let Some(s) = v.get("schema") {
            if s.as_str() != Some(SCHEMA) {
                return invalid(format!("unsupported schema {s}, expected {SCHEMA:?}"));
            }
        }
        let kind = match v.get("kind").and_then(Value::as_str) {
            Some(k) => k,
            None if v.get("g").is_some() && v.get("h").is_some() => "associator_pair",
            None if v.get("space").is_some() => "bar_tensor",
            None if v.get("alphabet").is_some() => "series",
            None => return invalid("cannot tell the document kind: expected a pair, series or bar tensor"),
        };
        Ok(match kind {
            "associator_pair" => Document::Pair(AssociatorPair::from_json_value(&v)?),
            "series" => Document::Series(Series::from_json_value(&v)?),
            "bar_tensor" => Document::Bar(BarTensor::from_json_value(&v)?),
            other => return invalid(format!("unknown document kind {other:?}")),
        })
    }

    pub fn load(path: &Path) -> Outcome<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Failure::Validation(m) => Failure::Validation(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: &Path) -> Outcome<()> {
        std::fs::write(path, self.render())
            .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))
    }
}

pub fn load_pair(path: &Path) -> Outcome<AssociatorPair> {
    match Document::load(path)? {
        Document::Pair(p) => Ok(p),
        other => invalid(format!("{} holds a {}, expected an associator pair", path.display(), other.kind())),
    }
}

/// Outcome of reading, re-rendering and re-reading a document.
#[derive(Debug)]
pub struct RoundTrip {
    pub kind: &'static str,
    /// The second rendering equals the first and the documents agree.
    pub stable: bool,
    /// The file on disk already is in canonical form.
    pub canonical: bool,
}

pub fn roundtrip(path: &Path) -> Outcome<RoundTrip> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    let doc = Document::parse(&text)?;
    let first = doc.render();
    let again = Document::parse(&first)?;
    Ok(RoundTrip {
        kind: doc.kind(),
        stable: again == doc && again.render() == first,
        canonical: first == text,
    })
}
