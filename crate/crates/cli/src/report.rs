//! Plain-text reports: key/value lines, tables, then the same data as JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Table { name: name.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.headers.iter().cloned().zip(r.iter().map(|c| json!(c))).collect()))
                .collect(),
        )
    }

    fn render(&self, out: &mut String) {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| self.rows.iter().map(|r| r[i].len()).chain([self.headers[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "[table {}]", self.name);
        let _ = writeln!(out, "{}", line(&self.headers));
        let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        for r in &self.rows {
            let _ = writeln!(out, "{}", line(r));
        }
    }
}

/// Residuals and other floats are printed in this fixed format.
pub fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
    json: Map<String, Value>,
    tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.text("command", command);
        r
    }

    pub fn text(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string();
        self.json.insert(key.into(), json!(v));
        self.entries.push((key.into(), v));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.json.insert(key.into(), json!(value));
        self.entries.push((key.into(), sci(value)));
    }

    pub fn int(&mut self, key: &str, value: u64) {
        self.json.insert(key.into(), json!(value));
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.json.insert(key.into(), json!(value));
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::from("dirac2d report\n\n");
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k:<width$} = {v}");
        }
        for t in &self.tables {
            out.push('\n');
            t.render(&mut out);
        }
        let mut doc = self.json.clone();
        doc.insert("tables".into(), Value::Object(self.tables.iter().map(|t| (t.name.clone(), t.to_json())).collect()));
        let _ = writeln!(out, "\n[json]\n{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_has_all_sections() {
        let mut r = Report::new("verify");
        r.num("max_residual", 1.5e-12);
        r.flag("passed", true);
        let mut t = Table::new("residuals", &["suite", "value"]);
        t.row(vec!["first".into(), sci(2.0)]);
        r.table(t);
        let s = r.render();
        assert!(s.contains("max_residual = 1.500000e-12"));
        assert!(s.contains("[table residuals]"));
        let json_part = s.split("[json]\n").nth(1).unwrap();
        let v: Value = serde_json::from_str(json_part).unwrap();
        assert_eq!(v["tables"]["residuals"][0]["value"], "2.000000e0");
        assert_eq!(v["passed"], true);
        assert_eq!(r.get("command"), Some("verify"));
    }
}
