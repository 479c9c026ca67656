//! Report assembly. Every entry is recorded once and rendered either as
//! aligned text or as one JSON object with a schema version.

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    command: &'static str,
    /// Human lines in insertion order; JSON keys are sorted by serde_json.
    lines: Vec<(String, String)>,
    json: Map<String, Value>,
    failed_checks: Vec<String>,
    /// Replaces the text rendering, for machine-oriented text such as CSV.
    raw_text: Option<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, lines: Vec::new(), json: Map::new(), failed_checks: Vec::new(), raw_text: None }
    }

    /// Records `value` under `key`, shown to humans as `text`.
    pub fn put(&mut self, key: &str, text: impl Into<String>, value: impl Into<Value>) {
        self.lines.push((key.replace('_', " "), text.into()));
        self.json.insert(key.into(), value.into());
    }

    /// Text and JSON carry the same string.
    pub fn put_str(&mut self, key: &str, text: impl Into<String>) {
        let t = text.into();
        self.put(key, t.clone(), t);
    }

    /// A consistency check; a failure makes the process exit with status 1.
    pub fn check(&mut self, name: &str, passed: bool) {
        if !passed {
            self.failed_checks.push(name.into());
        }
        self.lines.push((format!("check {}", name.replace('_', " ")), if passed { "pass" } else { "FAIL" }.into()));
        let checks = self.json.entry("checks").or_insert_with(|| Value::Object(Map::new()));
        checks.as_object_mut().unwrap().insert(name.into(), Value::Bool(passed));
    }

    pub fn set_text(&mut self, text: String) {
        self.raw_text = Some(text);
    }

    pub fn passed(&self) -> bool {
        self.failed_checks.is_empty()
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut obj = self.json.clone();
            obj.insert("schema_version".into(), SCHEMA_VERSION.into());
            obj.insert("command".into(), self.command.into());
            obj.insert("passed".into(), self.passed().into());
            return serde_json::to_string_pretty(&Value::Object(obj)).unwrap() + "\n";
        }
        if let Some(t) = &self.raw_text {
            return t.clone();
        }
        let mut out = format!("pcurv {} {}\n", env!("CARGO_PKG_VERSION"), self.command);
        let width = self.lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.lines {
            let mut rows = v.lines();
            out += &format!("{k:<width$}  {}\n", rows.next().unwrap_or(""));
            for r in rows {
                out += &format!("{:width$}  {r}\n", "");
            }
        }
        out
    }
}
