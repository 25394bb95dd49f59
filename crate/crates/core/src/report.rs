//! Machine-readable command reports.
//!
//! A report is `{command, config, results[], verdict, version}`. Each entry
//! of `results` is a flat JSON object, so the CSV rendering is one row per
//! entry with the union of keys as header. Numbers are written with the
//! same text in both encodings (shortest round-trip form); exact rationals
//! are fraction strings.

use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::rational::{to_fraction_string, Rational};

pub const SCHEMA_VERSION: &str = "1";

pub(crate) fn ser_rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_fraction_string(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Map<String, Value>,
    pub results: Vec<Map<String, Value>>,
    pub verdict: Verdict,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, config: Map<String, Value>) -> Self {
        Report {
            command: command.to_string(),
            config,
            results: Vec::new(),
            verdict: Verdict::Pass,
            version: SCHEMA_VERSION.to_string(),
        }
    }

    /// Append a result entry; `entry` must serialize to a flat JSON object.
    pub fn push<T: Serialize>(&mut self, kind: &str, entry: &T) {
        let mut row = Map::new();
        row.insert("kind".into(), Value::String(kind.into()));
        match serde_json::to_value(entry) {
            Ok(Value::Object(m)) => {
                for (k, v) in m {
                    row.insert(k, flatten(v));
                }
            }
            Ok(other) => {
                row.insert("value".into(), flatten(other));
            }
            Err(e) => {
                row.insert("error".into(), Value::String(e.to_string()));
            }
        }
        self.results.push(row);
    }

    pub fn fail(&mut self) {
        self.verdict = Verdict::Fail;
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Header is the union of result keys in order of first appearance.
    pub fn to_csv(&self) -> String {
        let mut header: Vec<&str> = Vec::new();
        for row in &self.results {
            for k in row.keys() {
                if !header.contains(&k.as_str()) {
                    header.push(k);
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        if !header.is_empty() {
            w.write_record(&header).expect("in-memory write");
        }
        for row in &self.results {
            let rec: Vec<String> = header.iter().map(|k| cell(row.get(*k))).collect();
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (schema v{})\n", self.command, self.version);
        for row in &self.results {
            let fields: Vec<String> = row.iter().map(|(k, v)| format!("{k}={}", cell(Some(v)))).collect();
            out.push_str("  ");
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out.push_str(match self.verdict {
            Verdict::Pass => "verdict: pass\n",
            Verdict::Fail => "verdict: FAIL\n",
        });
        out
    }
}

/// Nested values are kept as their compact JSON text.
fn flatten(v: Value) -> Value {
    match v {
        Value::Array(_) | Value::Object(_) => Value::String(v.to_string()),
        other => other,
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}
