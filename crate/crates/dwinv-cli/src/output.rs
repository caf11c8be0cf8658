//! Reports and their json, csv and pretty renderings.

use clap::ValueEnum;
use dwinv::linalg::C;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use std::io::Write;

pub const SCHEMA: u32 = 1;
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

pub fn snap(x: f64) -> f64 {
    if x.abs() < SNAP {
        0.0
    } else {
        x
    }
}

pub fn complex(z: C, tol: f64) -> Value {
    json!({ "re": snap(z.re), "im": snap(z.im), "tol": tol })
}

pub fn big(n: &BigInt) -> Value {
    match n.to_u64() {
        Some(k) => json!(k),
        None => json!(n.to_string()),
    }
}

pub fn colors(c: &[usize]) -> Value {
    json!(c.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Table { name: name.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.headers.iter().cloned().zip(r.iter().cloned()).collect()))
            .collect();
        Value::Array(rows)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Value)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), meta: Vec::new(), tables: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, v: impl Into<Value>) {
        self.meta.push((key.into(), v.into()));
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        for (k, v) in &self.meta {
            m.insert(k.clone(), v.clone());
        }
        let tables: Map<String, Value> = self.tables.iter().map(|t| (t.name.clone(), t.to_json())).collect();
        m.insert("tables".into(), Value::Object(tables));
        Value::Object(m)
    }

    pub fn render(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => self.render_csv(out),
            Format::Pretty => self.render_pretty(out),
        }
    }

    fn render_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        for (k, t) in self.tables.iter().enumerate() {
            if k > 0 {
                writeln!(out)?;
            }
            if self.tables.len() > 1 {
                writeln!(out, "# {}", t.name)?;
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&t.headers)?;
            for r in &t.rows {
                w.write_record(r.iter().map(cell_text))?;
            }
            w.flush()?;
        }
        Ok(())
    }

    fn render_pretty(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.command)?;
        for (k, v) in &self.meta {
            writeln!(out, "  {k}: {}", cell_text(v))?;
        }
        for t in &self.tables {
            writeln!(out, "\n{}", t.name)?;
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell_text).collect()).collect();
            let widths: Vec<usize> = (0..t.headers.len())
                .map(|j| cells.iter().map(|r| r[j].len()).chain([t.headers[j].len()]).max().unwrap_or(0))
                .collect();
            let line = |r: &[String]| r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ");
            writeln!(out, "{}", line(&t.headers).trim_end())?;
            for r in &cells {
                writeln!(out, "{}", line(r).trim_end())?;
            }
        }
        Ok(())
    }
}

/// Text form of a cell; complex cells print as `a+bi`.
pub fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Object(m) if m.contains_key("re") => {
            let re = m["re"].as_f64().unwrap_or(f64::NAN);
            let im = m["im"].as_f64().unwrap_or(f64::NAN);
            if im == 0.0 {
                format!("{re}")
            } else {
                format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs())
            }
        }
        Value::Object(m) if m.contains_key("value") => cell_text(&m["value"]),
        other => other.to_string(),
    }
}
