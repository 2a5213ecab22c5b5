use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Malformed manifest, missing file, or invalid definition (exit code 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<hochkit::Error> for InputError {
    fn from(e: hochkit::Error) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    ReductionCo,
    ReductionHo,
    Hochschild,
    Dualizing,
    AdjointAssoc,
    ExtAdjointAssoc,
    NerveSuite,
    QuasicatSuite,
    DgnerveSuite,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        f.write_str(s.as_str().expect("string variant"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub name: String,
    pub check: Check,
    #[serde(default)]
    pub inputs: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i32, i32)>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
}

fn default_p() -> u32 {
    5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default = "default_p")]
    pub p: u32,
    pub cases: Vec<CaseSpec>,
}

impl Manifest {
    pub fn from_path(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_text(&text, &base)
    }

    /// Parse and inline `{"file": path}` references relative to `base`.
    pub fn from_text(text: &str, base: &Path) -> Result<Self, InputError> {
        let mut v: Value = serde_json::from_str(text).map_err(|e| InputError(format!("manifest: {e}")))?;
        resolve_refs(&mut v, base, 0)?;
        Self::from_value(v)
    }

    pub fn from_value(v: Value) -> Result<Self, InputError> {
        let m: Manifest = serde_json::from_value(v).map_err(|e| InputError(format!("manifest: {e}")))?;
        let mut seen = HashSet::new();
        for c in &m.cases {
            if !seen.insert(c.name.as_str()) {
                return Err(InputError(format!("duplicate case name '{}'", c.name)));
            }
        }
        Ok(m)
    }
}

fn resolve_refs(v: &mut Value, base: &Path, depth: usize) -> Result<(), InputError> {
    if depth > 16 {
        return Err(InputError("file references nest too deeply".into()));
    }
    match v {
        Value::Object(map) if map.len() == 1 && map.get("file").is_some_and(Value::is_string) => {
            let rel = map["file"].as_str().expect("string");
            let path: PathBuf = base.join(rel);
            let text = std::fs::read_to_string(&path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let mut inner: Value = serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
            resolve_refs(&mut inner, &dir, depth + 1)?;
            *v = inner;
        }
        Value::Object(map) => {
            for x in map.values_mut() {
                resolve_refs(x, base, depth)?;
            }
        }
        Value::Array(xs) => {
            for x in xs {
                resolve_refs(x, base, depth)?;
            }
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn defaults_and_renames() {
        let m = Manifest::from_value(json!({"cases": [{"name": "a", "check": "hochschild", "L": 6, "window": [0, 2]}]})).unwrap();
        assert_eq!(m.p, 5);
        assert_eq!(m.cases[0].length, Some(6));
        assert_eq!(m.cases[0].window, Some((0, 2)));
        assert_eq!(m.cases[0].check.to_string(), "hochschild");
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(Manifest::from_value(json!({"cases": [{"name": "a", "check": "dualizing", "colour": 1}]})).is_err());
        assert!(Manifest::from_value(json!({"cases": [], "extra": true})).is_err());
    }

    #[test]
    fn nested_file_refs() {
        let dir = std::env::temp_dir().join(format!("hochkit-manifest-{}", std::process::id()));
        std::fs::create_dir_all(dir.join("sub")).unwrap();
        std::fs::write(dir.join("sub/inner.json"), "\"split:2\"").unwrap();
        std::fs::write(dir.join("outer.json"), r#"{"file": "sub/inner.json"}"#).unwrap();
        let text = r#"{"cases": [{"name": "a", "check": "dualizing", "inputs": {"S": {"file": "outer.json"}}}]}"#;
        let m = Manifest::from_text(text, &dir).unwrap();
        assert_eq!(m.cases[0].inputs["S"], json!("split:2"));
        std::fs::write(dir.join("loop.json"), r#"{"file": "loop.json"}"#).unwrap();
        let bad = r#"{"cases": [{"name": "a", "check": "dualizing", "inputs": {"S": {"file": "loop.json"}}}]}"#;
        assert!(Manifest::from_text(bad, &dir).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
