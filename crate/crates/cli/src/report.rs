//! Reports: one record per check, printed as text lines or JSON lines.

use serde_json::{json, Value};

pub struct Record {
    pub text: String,
    pub json: Value,
    /// `None` for informational records that are not checks.
    pub ok: Option<bool>,
}

#[derive(Default)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn check(&mut self, ok: bool, text: impl Into<String>, mut json: Value) {
        let suffix = if ok { "OK" } else { "FAIL" };
        json["ok"] = Value::Bool(ok);
        self.records.push(Record { text: format!("{}: {suffix}", text.into()), json, ok: Some(ok) });
    }

    pub fn info(&mut self, text: impl Into<String>, json: Value) {
        self.records.push(Record { text: text.into(), json, ok: None });
    }

    pub fn checks(&self) -> usize {
        self.records.iter().filter(|r| r.ok.is_some()).count()
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.ok == Some(false)).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// Text or JSON lines. A nonempty report ends with a summary record.
    pub fn render(&self, json_lines: bool) -> String {
        let mut out = String::new();
        let summary = (!self.records.is_empty()).then(|| {
            let (n, f) = (self.checks(), self.failures());
            (format!("summary: checks={n} failed={f}"), json!({ "summary": { "checks": n, "failed": f } }))
        });
        for (text, value) in self.records.iter().map(|r| (&r.text, &r.json)).chain(summary.iter().map(|(t, v)| (t, v))) {
            if json_lines {
                out.push_str(&value.to_string());
            } else {
                out.push_str(text);
            }
            out.push('\n');
        }
        out
    }
}
