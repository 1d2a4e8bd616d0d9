//! Case tables and their CSV / JSON renderings.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, schema: &str) -> String {
        let mut s = format!("# schema={schema}/v1\n{}\n", self.header.join(","));
        for row in &self.rows {
            s.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

/// Result of one command: the case table (one row per case, with a `pass` column), extra
/// tables, and extra JSON documents.
#[derive(Clone, Debug, Default)]
pub struct CommandOutput {
    pub cases: Table,
    pub extra_tables: Vec<(String, Table)>,
    pub documents: Vec<(String, Value)>,
}

impl CommandOutput {
    pub fn pass_flags(&self) -> Vec<bool> {
        let col = self.cases.header.iter().position(|h| *h == "pass").expect("case table has a pass column");
        self.cases.rows.iter().map(|r| matches!(r[col], Cell::Bool(true))).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseSummary {
    pub index: usize,
    pub pass: bool,
    pub values: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub cases: Vec<CaseSummary>,
    pub passed: usize,
    pub failed: usize,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn new(command: &str, config: BTreeMap<String, String>, out: &CommandOutput, wall: f64) -> Self {
        let flags = out.pass_flags();
        let cases: Vec<CaseSummary> = out
            .cases
            .rows
            .iter()
            .zip(&flags)
            .enumerate()
            .map(|(index, (row, pass))| CaseSummary {
                index,
                pass: *pass,
                values: out.cases.header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect(),
            })
            .collect();
        let passed = flags.iter().filter(|p| **p).count();
        Self {
            command: command.to_string(),
            config,
            passed,
            failed: cases.len() - passed,
            cases,
            wall_time_seconds: wall,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b", "pass"]);
        t.push(vec![Cell::from(0.1), Cell::from("x,y"), Cell::from(true)]);
        let csv = t.to_csv("demo");
        assert_eq!(csv, "# schema=demo/v1\na,b,pass\n1.0000000000000001e-1,\"x,y\",true\n");
    }
}
