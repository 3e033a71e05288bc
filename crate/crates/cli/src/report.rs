use std::fmt;

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "penta/1";

/// Exit status classes other than success and verification failure.
#[derive(Debug)]
pub enum Failure {
    /// Bad options or malformed input: exit 2.
    Validation(String),
    /// Something that should not happen on valid input: exit 3.
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid input: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<penta_core::Error> for Failure {
    fn from(e: penta_core::Error) -> Self {
        use penta_core::Error as E;
        match e {
            E::AlphabetMismatch(..)
            | E::TruncationMismatch(..)
            | E::Precondition(_)
            | E::MissingImage(_)
            | E::DegreeMismatch { .. }
            | E::Invalid(_)
            | E::LevelMismatch(..)
            | E::DegreeOverflow(..)
            | E::Parse { .. }
            | E::Io(_)
            | E::Json(_) => Failure::Validation(e.to_string()),
            E::NotPrimitive(_) | E::InconsistentSystem { .. } | E::Cache(_) | E::Numeric(_) => {
                Failure::Internal(e.to_string())
            }
        }
    }
}

pub type Outcome<T> = Result<T, Failure>;

pub fn invalid<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Validation(msg.into()))
}

#[derive(Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// One line for the human summary.
    pub summary: String,
    pub detail: Value,
}

/// The document every verb produces.
#[derive(Debug)]
pub struct Report {
    pub verb: &'static str,
    pub options: Value,
    pub cache: Value,
    pub checks: Vec<Check>,
    pub results: Map<String, Value>,
    /// Extra lines for the human summary, printed before the checks.
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(verb: &'static str, options: Value) -> Self {
        Report {
            verb,
            options,
            cache: json!({ "root": std::env::var("PENTA_CACHE").ok().filter(|s| !s.is_empty()), "keys": [] }),
            checks: Vec::new(),
            results: Map::new(),
            lines: Vec::new(),
        }
    }

    pub fn cache_keys(&mut self, keys: Vec<(String, String)>) {
        let v: Vec<Value> = keys.into_iter().map(|(n, k)| json!({ "presentation": n, "key": k })).collect();
        self.cache["keys"] = Value::Array(v);
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, summary: impl Into<String>, detail: Value) {
        let name = name.into();
        log::debug!("{name}: {}", if pass { "pass" } else { "FAIL" });
        self.checks.push(Check {
            name,
            pass,
            summary: summary.into(),
            detail,
        });
    }

    /// A numeric residual against a tolerance; both are always reported.
    pub fn tolerance_check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        let pass = residual.is_finite() && residual < tolerance;
        self.check(
            name,
            pass,
            format!("residual {residual:.3e} (tolerance {tolerance:.1e})"),
            json!({ "residual": residual, "tolerance": tolerance }),
        );
    }

    pub fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.to_string(), v);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
            .collect();
        json!({
            "schema": SCHEMA,
            "verb": self.verb,
            "options": self.options,
            "cache": self.cache,
            "passed": self.passed(),
            "checks": checks,
            "results": Value::Object(self.results.clone()),
        })
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark}  {}: {}\n", c.name, c.summary));
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!(
            "{}: {} ({} checks, {} failed)\n",
            self.verb,
            if failed == 0 { "ok" } else { "verification failed" },
            self.checks.len(),
            failed
        ));
        out
    }
}
