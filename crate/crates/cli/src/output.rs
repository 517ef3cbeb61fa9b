//! CSV and JSON rendering with fixed number formatting.

use serde_json::{json, Map, Value};

use emdual::{QuadratureConfig, Trajectory};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(Option<f64>),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, round-trip exact; `-0` prints as `0`.
pub fn format_number(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Empty or non-finite numeric cells.
    pub fn failed_cells(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .filter(|c| matches!(c, Cell::Num(v) if !v.map_or(false, f64::is_finite)))
            .count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(Some(v)) if v.is_finite() => format_number(*v),
                    Cell::Num(_) => String::new(),
                    Cell::Text(t) => csv_field(t),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| match c {
                            Cell::Num(Some(v)) if v.is_finite() => json!(v),
                            Cell::Num(_) => Value::Null,
                            Cell::Text(t) => json!(t),
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "columns": self.columns, "rows": rows })
    }
}

/// Two-column `quantity,value` table from key/value pairs.
pub fn key_value_table(pairs: &[(String, Cell)]) -> Table {
    let mut t = Table::new(&["quantity", "value"]);
    for (k, v) in pairs {
        t.push(vec![Cell::Text(k.clone()), v.clone()]);
    }
    t
}

/// Top-level JSON document shared by every subcommand.
pub fn envelope(
    command: &str,
    trajectory: &Trajectory,
    units: &str,
    cfg: &QuadratureConfig,
    extra: Map<String, Value>,
    data: Value,
) -> Value {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("tool".into(), json!("emdual"));
    doc.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    doc.insert("command".into(), json!(command));
    doc.insert("trajectory".into(), serde_json::to_value(trajectory).unwrap_or(Value::Null));
    doc.insert("units".into(), json!(units));
    doc.insert(
        "quadrature".into(),
        json!({ "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol }),
    );
    for (k, v) in extra {
        doc.insert(k, v);
    }
    doc.insert("data".into(), data);
    Value::Object(doc)
}

pub fn render_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}
