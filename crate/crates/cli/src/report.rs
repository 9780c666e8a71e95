use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// Hex characters kept from the SHA-256 input digest.
const DIGEST_HEX_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    /// `None` for inputs that did not come from a sampled trial.
    pub trial: Option<u64>,
    pub seed: u64,
    pub inputs_digest: String,
    /// Smallest eigenvalue of the difference (tensor families).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    /// `lhs - rhs` (scalar families).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialReport {
    pub schema_version: u32,
    pub command: String,
    pub family: String,
    pub params: BTreeMap<String, Value>,
    pub trials: u64,
    pub violations: Vec<Violation>,
    /// Smallest raw margin (or smallest eigenvalue) over all evaluated inputs.
    pub min_margin: Option<f64>,
    /// Smallest margin divided by its scale.
    pub min_relative_margin: Option<f64>,
    pub equality_cases: u64,
    pub seed: u64,
    pub tolerance_used: f64,
    pub runtime_ms: u64,
    pub interpretation_flags: Vec<String>,
}

impl TrialReport {
    pub fn new(command: &str, family: impl Into<String>, seed: u64, tolerance: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            family: family.into(),
            params: BTreeMap::new(),
            trials: 0,
            violations: Vec::new(),
            min_margin: None,
            min_relative_margin: None,
            equality_cases: 0,
            seed,
            tolerance_used: tolerance,
            runtime_ms: 0,
            interpretation_flags: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("parameter serializes");
        self.params.insert(key.to_string(), v);
    }

    pub fn flag(&mut self, text: impl Into<String>) {
        self.interpretation_flags.push(text.into());
    }

    /// Folds one evaluated input into the running minima.
    pub fn observe(&mut self, margin: f64, scale: f64) {
        let rel = margin / scale;
        self.min_margin = Some(self.min_margin.map_or(margin, |m| m.min(margin)));
        self.min_relative_margin = Some(self.min_relative_margin.map_or(rel, |m| m.min(rel)));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Two-column `field,value` table with one row per JSON leaf.
    pub fn to_csv(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["field", "value"]).expect("in-memory write");
        for (k, v) in rows {
            w.write_record([k, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn write(&self, format: Format, out: Option<&std::path::Path>) -> std::io::Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

/// Flattens a JSON value into `(path, scalar)` rows; array elements are
/// addressed as `name.0`, `name.1`, ...
pub fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push((prefix.to_string(), String::new()));
            }
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), "null".into())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Truncated SHA-256 of the little-endian bytes of `values`.
pub fn inputs_digest(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    let mut s = hex::encode(h.finalize());
    s.truncate(DIGEST_HEX_LEN);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows_mirror_json_leaves() {
        let mut r = TrialReport::new("verify", "hlawka3", 7, 1e-8);
        r.param("p", 3);
        r.observe(-0.5, 2.0);
        r.violations.push(Violation {
            trial: Some(1),
            seed: 99,
            inputs_digest: inputs_digest(&[1.0]),
            min_eigenvalue: Some(-0.5),
            margin: None,
            scale: 2.0,
            inputs: None,
        });
        let csv = r.to_csv();
        assert!(csv.contains("violations.0.minEigenvalue,-0.5\n"));
        assert!(csv.contains("minRelativeMargin,-0.25\n"));
        assert!(csv.contains("interpretationFlags,\n"));
        assert!(csv.contains("params.p,3\n"));
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(inputs_digest(&[]), "e3b0c44298fc1c14");
        assert_ne!(inputs_digest(&[0.0]), inputs_digest(&[-0.0]));
    }
}
