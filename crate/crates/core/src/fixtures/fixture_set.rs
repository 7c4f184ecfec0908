use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the source material.
    Reference,
    /// Follows directly from a definition.
    Trivial,
    /// Computed by a named oracle.
    Derived,
}

/// One stored input with its expected values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub id: String,
    pub input: Value,
    pub expected: Vec<f64>,
    pub tolerance: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSet {
    pub name: String,
    pub entries: Vec<FixtureEntry>,
}

/// Computes expected values from a fixture input.
pub trait Oracle: Send + Sync {
    fn id(&self) -> &str;
    fn compute(&self, input: &Value) -> Result<Vec<f64>>;
}

type OracleFn = dyn Fn(&Value) -> Result<Vec<f64>> + Send + Sync;

/// An [`Oracle`] from a closure.
pub struct FnOracle {
    id: String,
    f: Box<OracleFn>,
}

impl FnOracle {
    pub fn new(id: &str, f: impl Fn(&Value) -> Result<Vec<f64>> + Send + Sync + 'static) -> Self {
        Self { id: id.to_string(), f: Box::new(f) }
    }
}

impl Oracle for FnOracle {
    fn id(&self) -> &str {
        &self.id
    }

    fn compute(&self, input: &Value) -> Result<Vec<f64>> {
        (self.f)(input)
    }
}

#[derive(Clone, Default)]
pub struct OracleRegistry {
    oracles: BTreeMap<String, Arc<dyn Oracle>>,
}

impl fmt::Debug for OracleRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.oracles.keys()).finish()
    }
}

impl OracleRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, oracle: Arc<dyn Oracle>) {
        self.oracles.insert(oracle.id().to_string(), oracle);
    }

    pub fn get(&self, id: &str) -> Result<&Arc<dyn Oracle>> {
        self.oracles.get(id).ok_or_else(|| Error::Unknown { what: "oracle", name: id.to_string() })
    }
}

/// Stored against recomputed values for one derived entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Regeneration {
    pub id: String,
    pub stored: Vec<f64>,
    pub computed: Vec<f64>,
    /// Largest `|stored − computed| / max(1, |stored|)`.
    pub max_error: f64,
    pub within_tolerance: bool,
}

fn relative_error(stored: &[f64], computed: &[f64]) -> f64 {
    if stored.len() != computed.len() {
        return f64::INFINITY;
    }
    stored.iter().zip(computed).map(|(a, b)| (a - b).abs() / a.abs().max(1.0)).fold(0.0, |m, e| {
        if e.is_nan() {
            f64::INFINITY
        } else {
            m.max(e)
        }
    })
}

impl FixtureSet {
    pub fn from_json(text: &str) -> Result<Self> {
        let set: FixtureSet =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        set.validate()?;
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Pretty JSON with a trailing newline; equal sets give equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fixture sets serialize");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn get(&self, id: &str) -> Option<&FixtureEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |id: &str, message: &str| Error::Validation { field: id.to_string(), message: message.into() };
        for (k, e) in self.entries.iter().enumerate() {
            if self.entries[..k].iter().any(|o| o.id == e.id) {
                return Err(invalid(&e.id, "duplicate id"));
            }
            if e.expected.is_empty() || e.expected.iter().any(|x| !x.is_finite()) {
                return Err(invalid(&e.id, "expected values must be finite and nonempty"));
            }
            if e.tolerance.is_nan() || e.tolerance <= 0.0 {
                return Err(invalid(&e.id, "tolerance must be positive"));
            }
            match (e.provenance, &e.oracle) {
                (Provenance::Derived, None) => return Err(invalid(&e.id, "derived values need an oracle")),
                (Provenance::Reference | Provenance::Trivial, Some(_)) => {
                    return Err(invalid(&e.id, "only derived values name an oracle"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Recomputes every derived entry with its oracle.
    pub fn regenerate(&self, oracles: &OracleRegistry) -> Result<Vec<Regeneration>> {
        let mut out = Vec::new();
        for e in &self.entries {
            let Some(id) = &e.oracle else { continue };
            let computed = oracles.get(id)?.compute(&e.input)?;
            let max_error = relative_error(&e.expected, &computed);
            out.push(Regeneration {
                id: e.id.clone(),
                stored: e.expected.clone(),
                computed,
                max_error,
                within_tolerance: max_error <= e.tolerance,
            });
        }
        Ok(out)
    }

    /// Replaces derived values by their recomputed ones.
    pub fn refresh(&mut self, oracles: &OracleRegistry) -> Result<()> {
        for e in &mut self.entries {
            if let Some(id) = &e.oracle {
                e.expected = oracles.get(id)?.compute(&e.input)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_set() -> FixtureSet {
        FixtureSet::from_json(
            r#"{
  "name": "demo",
  "entries": [
    {"id": "half", "input": {"x": 0.5}, "expected": [0.25], "tolerance": 1e-15, "provenance": "derived", "oracle": "square"},
    {"id": "one", "input": {}, "expected": [1.0], "tolerance": 1e-15, "provenance": "trivial"}
  ]
}"#,
        )
        .unwrap()
    }

    fn oracles() -> OracleRegistry {
        let mut r = OracleRegistry::new();
        r.register(Arc::new(FnOracle::new("square", |v| {
            let x = v["x"].as_f64().ok_or(Error::Precondition("x".into()))?;
            Ok(vec![x * x])
        })));
        r
    }

    #[test]
    fn regenerate_matches() {
        let regen = sample_set().regenerate(&oracles()).unwrap();
        assert_eq!(regen.len(), 1);
        assert!(regen[0].within_tolerance);
    }

    #[test]
    fn json_round_trip_is_stable() {
        let s = sample_set();
        let text = s.to_json();
        assert_eq!(FixtureSet::from_json(&text).unwrap(), s);
        assert_eq!(FixtureSet::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn derived_needs_oracle() {
        let bad =
            r#"{"name":"x","entries":[{"id":"a","input":{},"expected":[1],"tolerance":1,"provenance":"derived"}]}"#;
        assert!(matches!(FixtureSet::from_json(bad), Err(Error::Validation { .. })));
    }

    #[test]
    fn stale_value_detected() {
        let mut s = sample_set();
        s.entries[0].expected = vec![0.3];
        assert!(!s.regenerate(&oracles()).unwrap()[0].within_tolerance);
        s.refresh(&oracles()).unwrap();
        assert!(s.regenerate(&oracles()).unwrap()[0].within_tolerance);
    }
}
