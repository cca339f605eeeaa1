use serde::Serialize;
use serde_json::Value;

use ci_slope_core::Error;

/// Output format selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// One command result. Fields are declared in key order and every nested
/// map is a `serde_json::Map`, which is ordered by key, so output is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub diagnostics: Vec<String>,
    pub inputs: Value,
    pub outputs: Value,
}

impl Report {
    pub fn new(command: &str, inputs: impl Serialize) -> Self {
        Report {
            command: command.to_string(),
            diagnostics: Vec::new(),
            inputs: to_value(inputs),
            outputs: Value::Null,
        }
    }

    pub fn outputs(mut self, outputs: impl Serialize) -> Self {
        self.outputs = to_value(outputs);
        self
    }

    pub fn note(&mut self, message: impl Into<String>) {
        self.diagnostics.push(message.into());
    }

    /// Renders for stdout. `compact` selects single-line JSON (batch mode).
    pub fn render(&self, format: Format, compact: bool) -> String {
        match format {
            Format::Json if compact => serde_json::to_string(self).expect("report serializes"),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Table => self.table(),
        }
    }

    fn table(&self) -> String {
        let mut rows = vec![("command".to_string(), self.command.clone())];
        flatten("inputs", &self.inputs, &mut rows);
        flatten("outputs", &self.outputs, &mut rows);
        for (i, d) in self.diagnostics.iter().enumerate() {
            rows.push((format!("diagnostics[{i}]"), d.clone()));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                flatten(&format!("{prefix}.{k}"), v, rows);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// A failed command: the exit code plus the partial report to print.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub report: Report,
}

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CROSS_CHECK: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_USAGE,
        Error::CrossCheck(_) | Error::SpecMismatch => EXIT_CROSS_CHECK,
        _ => EXIT_DOMAIN,
    }
}

impl Failure {
    pub fn new(code: i32, mut report: Report, message: impl Into<String>) -> Self {
        report.note(message);
        Failure { code, report }
    }

    pub fn from_error(report: Report, err: Error) -> Self {
        Failure::new(exit_code(&err), report, err.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted() {
        let r = Report::new("x", json!({"zeta": 1, "alpha": 2}))
            .outputs(json!({"b": "1/2", "a": true}));
        assert_eq!(
            r.render(Format::Json, true),
            r#"{"command":"x","diagnostics":[],"inputs":{"alpha":2,"zeta":1},"outputs":{"a":true,"b":"1/2"}}"#
        );
    }

    #[test]
    fn table_lists_leaf_values() {
        let mut r =
            Report::new("slope", json!({"n": 3})).outputs(json!({"lambda": "24/5", "xs": [1, 2]}));
        r.note("hello");
        let t = r.render(Format::Table, false);
        assert!(t.contains("outputs.lambda"));
        assert!(t.contains("24/5"));
        assert!(t.contains("outputs.xs[1]"));
        assert!(t.contains("diagnostics[0]"));
    }
}
