use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA: &str = "gtc-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Output of one command: ordered key/value facts plus pass/fail checks.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    fields: Vec<(String, Value)>,
    checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            fields: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let mut out: BTreeMap<String, Value> = self.fields.iter().cloned().collect();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), self.command.into());
        out.insert("passed".into(), self.passed().into());
        out.insert(
            "checks".into(),
            serde_json::to_value(&self.checks).expect("plain data"),
        );
        serde_json::to_value(out).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.fields {
            let _ = writeln!(s, "{k}: {}", render(v));
        }
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "[{mark}] {}: {}", c.name, c.detail);
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(s, "{} checks, {failed} failed", self.checks.len());
        }
        s
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.is_empty() => "none".into(),
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            items.iter().map(render).collect::<Vec<_>>().join(", ")
        }
        Value::Object(map) if map.values().all(|i| !i.is_object() && !i.is_array()) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", render(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
