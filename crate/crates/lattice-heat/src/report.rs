//! Run reports and their json, csv and pretty renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

pub const REPORT_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

/// A float as a JSON number with 17 significant digits. Non-finite values
/// become strings since JSON has no spelling for them.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(
            format!("{x:.16e}")
                .parse::<Number>()
                .expect("formatted float is a valid JSON number"),
        )
    } else {
        Value::String(x.to_string())
    }
}

/// Ordered JSON object from key/value pairs.
pub fn object<I, K>(pairs: I) -> Map<String, Value>
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

/// One verified relation: what was compared, where, and the verdict.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub parameters: Map<String, Value>,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual <= tolerance`; a NaN residual fails.
    pub fn within(
        name: impl Into<String>,
        parameters: Map<String, Value>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            name: name.into(),
            parameters,
            residual: Some(residual),
            tolerance: Some(tolerance),
            pass: residual <= tolerance,
        }
    }

    /// Exact comparison with no residual.
    pub fn exact(name: impl Into<String>, parameters: Map<String, Value>, pass: bool) -> Self {
        Check {
            name: name.into(),
            parameters,
            residual: None,
            tolerance: None,
            pass,
        }
    }

    fn to_value(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.extend(self.parameters.clone());
        m.insert("residual".into(), self.residual.map_or(Value::Null, num));
        m.insert("tolerance".into(), self.tolerance.map_or(Value::Null, num));
        m.insert("pass".into(), Value::Bool(self.pass));
        m
    }

    pub fn describe(&self) -> String {
        let mut s = self.name.clone();
        for (k, v) in &self.parameters {
            let _ = write!(s, " {k}={}", short_text(v));
        }
        if let (Some(r), Some(t)) = (self.residual, self.tolerance) {
            let _ = write!(s, " residual={r:.3e} tolerance={t:.3e}");
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub arguments: Vec<String>,
    pub parameters: Map<String, Value>,
    pub results: Vec<Map<String, Value>>,
    /// Command-specific payloads such as a rational function or a matrix.
    pub extras: Map<String, Value>,
    pub checks: Vec<Check>,
    pub wall_clock_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Map<String, Value>) -> Self {
        RunReport {
            command: command.to_string(),
            arguments: Vec::new(),
            parameters,
            results: Vec::new(),
            extras: Map::new(),
            checks: Vec::new(),
            wall_clock_seconds: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert(
            "report_version".into(),
            Value::String(REPORT_VERSION.into()),
        );
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert(
            "arguments".into(),
            Value::Array(self.arguments.iter().cloned().map(Value::String).collect()),
        );
        m.insert("parameters".into(), Value::Object(self.parameters.clone()));
        m.insert(
            "results".into(),
            Value::Array(self.results.iter().cloned().map(Value::Object).collect()),
        );
        m.extend(self.extras.clone());
        m.insert(
            "checks".into(),
            Value::Array(
                self.checks
                    .iter()
                    .map(|c| Value::Object(c.to_value()))
                    .collect(),
            ),
        );
        m.insert("all_pass".into(), Value::Bool(self.all_pass()));
        if let Some(s) = self.wall_clock_seconds {
            m.insert("wall_clock_seconds".into(), num(s));
        }
        Value::Object(m)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json()).expect("report serialises");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Pretty => self.render_pretty(),
        }
    }

    /// The main table: a matrix if present, otherwise the results, otherwise the checks.
    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(Value::Array(rows)) = self.extras.get("matrix") {
            for row in rows {
                let cells: Vec<String> = row
                    .as_array()
                    .map(|r| r.iter().map(scalar_text).collect())
                    .unwrap_or_default();
                w.write_record(&cells).expect("in-memory csv");
            }
        } else {
            let rows: Vec<Map<String, Value>> = if self.results.is_empty() {
                self.checks.iter().map(Check::to_value).collect()
            } else {
                self.results.clone()
            };
            let header = column_union(&rows);
            w.write_record(&header).expect("in-memory csv");
            for row in &rows {
                w.write_record(
                    header
                        .iter()
                        .map(|k| row.get(k).map(scalar_text).unwrap_or_default()),
                )
                .expect("in-memory csv");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
    }

    fn render_pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "lattice-heat {} (report {REPORT_VERSION})",
            self.command
        );
        if !self.parameters.is_empty() {
            out.push_str("parameters\n");
            let width = self.parameters.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in &self.parameters {
                let _ = writeln!(out, "  {k:<width$}  {}", short_text(v));
            }
        }
        for (k, v) in &self.extras {
            match v {
                Value::Array(rows) if rows.iter().all(Value::is_array) => {
                    let _ = writeln!(out, "{k}");
                    let cells: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            r.as_array()
                                .map(|r| r.iter().map(short_text).collect())
                                .unwrap_or_default()
                        })
                        .collect();
                    out.push_str(&table(&[], &cells));
                }
                _ => {
                    let _ = writeln!(out, "{k}: {}", short_text(v));
                }
            }
        }
        if !self.results.is_empty() {
            out.push_str("results\n");
            let header = column_union(&self.results);
            let cells: Vec<Vec<String>> = self
                .results
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .map(|k| r.get(k).map(short_text).unwrap_or_default())
                        .collect()
                })
                .collect();
            out.push_str(&table(&header, &cells));
        }
        if !self.checks.is_empty() {
            out.push_str("checks\n");
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "  {} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.describe()
                );
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(
            out,
            "verdict: {} ({passed}/{} checks)",
            if self.all_pass() { "PASS" } else { "FAIL" },
            self.checks.len()
        );
        if let Some(s) = self.wall_clock_seconds {
            let _ = writeln!(out, "wall clock: {s:.3}s");
        }
        out
    }
}

fn column_union(rows: &[Map<String, Value>]) -> Vec<String> {
    let mut header: Vec<String> = Vec::new();
    for row in rows {
        for k in row.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    header
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

/// Shortest round-trip spelling of numbers, for human-facing text.
fn short_text(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.to_string().parse::<f64>() {
            Ok(x) if n.to_string().contains(['e', 'E', '.']) => {
                if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
                    format!("{x}")
                } else {
                    format!("{x:e}")
                }
            }
            _ => n.to_string(),
        },
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(short_text).collect::<Vec<_>>().join(", ")
        ),
        other => scalar_text(other),
    }
}

fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let ncols = rows
        .iter()
        .map(Vec::len)
        .chain([header.len()])
        .max()
        .unwrap_or(0);
    let mut widths = vec![0usize; ncols];
    for r in rows.iter().chain(std::iter::once(&header.to_vec())) {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        out.push(' ');
        for (i, c) in cells.iter().enumerate() {
            let _ = write!(out, " {c:>w$}", w = widths[i]);
        }
        out.push('\n');
    };
    if !header.is_empty() {
        line(header);
    }
    for r in rows {
        line(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-2.5).to_string(), "-2.5000000000000000e+0");
        assert_eq!(num(f64::NAN), Value::String("NaN".into()));
    }

    #[test]
    fn csv_uses_union_of_columns() {
        let mut r = RunReport::new("x", Map::new());
        r.results.push(object([("a", num(1.0))]));
        r.results
            .push(object([("a", num(2.0)), ("b", Value::Bool(true))]));
        assert_eq!(
            r.render(OutputFormat::Csv),
            "a,b\n1.0000000000000000e+0,\n2.0000000000000000e+0,true\n"
        );
    }

    #[test]
    fn failed_check_flips_verdict() {
        let mut r = RunReport::new("x", Map::new());
        r.checks.push(Check::within("ok", Map::new(), 1e-14, 1e-12));
        assert!(r.all_pass());
        r.checks
            .push(Check::within("bad", Map::new(), f64::NAN, 1e-12));
        assert!(!r.all_pass());
        assert_eq!(r.first_failure().unwrap().name, "bad");
    }
}
