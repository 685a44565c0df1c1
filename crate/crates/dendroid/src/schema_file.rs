//! Schema files: a JSON list of `{"name", "kind", "labels"}` entries.
//!
//! ```json
//! [
//!   {"name": "smoker", "kind": "discrete", "labels": ["no", "yes"]},
//!   {"name": "height", "kind": "gaussian"}
//! ]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use dendroid_core::{VariableKind, VariableSchema};

use crate::error::Failure;

/// One variable as written in a schema file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    /// Column name, matched against the CSV header.
    pub name: String,
    /// `discrete` or `gaussian`.
    pub kind: KindTag,
    /// Category labels of a discrete variable, in index order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Variable kind tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    /// Finite-valued.
    Discrete,
    /// Real-valued, modelled as normal.
    Gaussian,
}

/// Convert file entries to a validated schema.
pub fn entries_to_schema(entries: &[VariableEntry]) -> Result<VariableSchema, String> {
    let mut vars = Vec::with_capacity(entries.len());
    for e in entries {
        let kind = match (e.kind, &e.labels) {
            (KindTag::Discrete, Some(labels)) => VariableKind::discrete(labels.iter().cloned()),
            (KindTag::Discrete, None) => {
                return Err(format!("discrete variable `{}` needs `labels`", e.name));
            }
            (KindTag::Gaussian, None) => VariableKind::Gaussian,
            (KindTag::Gaussian, Some(_)) => {
                return Err(format!("Gaussian variable `{}` must not have `labels`", e.name));
            }
        };
        vars.push((e.name.clone(), kind));
    }
    VariableSchema::new(vars).map_err(|e| e.to_string())
}

/// File entries describing `schema`.
pub fn schema_to_entries(schema: &VariableSchema) -> Vec<VariableEntry> {
    schema
        .iter()
        .map(|(name, kind)| match kind {
            VariableKind::Discrete { labels } => VariableEntry {
                name: name.to_string(),
                kind: KindTag::Discrete,
                labels: Some(labels.clone()),
            },
            VariableKind::Gaussian => VariableEntry {
                name: name.to_string(),
                kind: KindTag::Gaussian,
                labels: None,
            },
        })
        .collect()
}

/// Parse schema JSON text.
pub fn parse_schema(text: &str) -> Result<VariableSchema, String> {
    let entries: Vec<VariableEntry> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    entries_to_schema(&entries)
}

/// Read and parse a schema file.
pub fn read_schema(path: &Path) -> Result<VariableSchema, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_schema(&text).map_err(|msg| Failure::input(path, msg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"[{"name":"a","kind":"discrete","labels":["x","y"]},{"name":"b","kind":"gaussian"}]"#;
        let schema = parse_schema(text).unwrap();
        assert_eq!(schema.kind(0).cardinality(), Some(2));
        assert!(schema.kind(1).is_gaussian());
        let back = serde_json::to_string(&schema_to_entries(&schema)).unwrap();
        assert_eq!(back, text);
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(parse_schema(r#"[{"name":"a","kind":"discrete"}]"#).is_err());
        assert!(parse_schema(r#"[{"name":"a","kind":"gaussian","labels":["x"]}]"#).is_err());
        assert!(parse_schema(r#"[{"name":"a","kind":"poisson"}]"#).is_err());
        assert!(parse_schema(r#"[{"name":"a","kind":"discrete","labels":["x","x"]}]"#).is_err());
        assert!(parse_schema("[]").is_err());
    }
}
