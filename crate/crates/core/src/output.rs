//! Versioned CSV and JSON-lines tables.
//!
//! CSV files open with `#` comment lines carrying the schema name, version
//! and a JSON echo of the producing configuration, followed by a header row.
//! JSON-lines files open with one header object holding the same information
//! and then one object per row. Floats use the shortest representation that
//! round-trips; missing values are empty cells in CSV and `null` in JSON.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv or jsonl)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Float(v) if v.is_nan() => String::new(),
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Json::Null, Json::Number),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Json::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: &'static str, columns: &[&'static str]) -> Self {
        Self {
            schema,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes the table; `config` is echoed into the header.
    pub fn write<W: Write>(&self, mut w: W, format: Format, config: &Json) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(w, "# schema: {} v{}", self.schema, SCHEMA_VERSION)?;
                writeln!(w, "# config: {}", serde_json::to_string(config)?)?;
                let mut out = csv::Writer::from_writer(&mut w);
                out.write_record(&self.columns)?;
                for row in &self.rows {
                    out.write_record(row.iter().map(Cell::to_csv))?;
                }
                out.flush()?;
            }
            Format::Jsonl => {
                let header = json!({
                    "schema": self.schema,
                    "version": SCHEMA_VERSION,
                    "columns": self.columns,
                    "config": config,
                });
                writeln!(w, "{}", serde_json::to_string(&header)?)?;
                for row in &self.rows {
                    let mut obj = Map::new();
                    for (name, cell) in self.columns.iter().zip(row) {
                        obj.insert((*name).to_string(), cell.to_json());
                    }
                    writeln!(w, "{}", serde_json::to_string(&Json::Object(obj))?)?;
                }
            }
        }
        Ok(())
    }

    pub fn to_string(&self, format: Format, config: &Json) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, format, config)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("tables are UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_floats() {
        let mut t = Table::new("demo", &["x", "y", "flag"]);
        t.push(vec![0.1.into(), Cell::Empty, true.into()]);
        t.push(vec![(1.0 / 3.0).into(), 2.5e-300.into(), false.into()]);
        let s = t.to_string(Format::Csv, &json!({"k": 1}));
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("# schema: demo v1"));
        assert_eq!(lines.next(), Some("# config: {\"k\":1}"));
        assert_eq!(lines.next(), Some("x,y,flag"));
        assert_eq!(lines.next(), Some("0.1,,true"));
        let last: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(last[0].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(last[1].parse::<f64>().unwrap(), 2.5e-300);
    }

    #[test]
    fn jsonl_header_and_rows() {
        let mut t = Table::new("demo", &["x", "name"]);
        t.push(vec![f64::INFINITY.into(), "a".into()]);
        let s = t.to_string(Format::Jsonl, &json!(null));
        let lines: Vec<Json> = s.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines[0]["schema"], "demo");
        assert_eq!(lines[0]["version"], 1);
        assert_eq!(lines[1]["x"], Json::Null);
        assert_eq!(lines[1]["name"], "a");
    }
}
