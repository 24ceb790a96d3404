//! Output tables rendered as JSON or CSV. CSV numbers use `{:.16e}`
//! (17 significant digits, `.` decimal point) so output is locale-free and
//! byte-stable.

use std::io::Write;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    B(bool),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.16e}"),
            Cell::I(i) => i.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => Value::from(*x),
            Cell::I(i) => Value::from(*i),
            Cell::B(b) => Value::from(*b),
            Cell::S(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rows under fixed columns plus free-form metadata. A `single` table is a
/// record: JSON emits the one row as an object.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(&'static str, Cell)>,
    pub single: bool,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), ..Table::default() }
    }

    pub fn record(columns: &[&'static str], row: Vec<Cell>) -> Self {
        Table { columns: columns.to_vec(), rows: vec![row], meta: Vec::new(), single: true }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.meta.push((key, value.into()));
        self
    }

    fn row_object(&self, row: &[Cell]) -> Map<String, Value> {
        self.columns.iter().zip(row).map(|(k, v)| (k.to_string(), v.json())).collect()
    }

    pub fn to_json(&self) -> String {
        let mut obj = if self.single && self.rows.len() == 1 {
            self.row_object(&self.rows[0])
        } else {
            let mut m = Map::new();
            m.insert("rows".into(), Value::Array(self.rows.iter().map(|r| Value::Object(self.row_object(r))).collect()));
            m
        };
        for (k, v) in &self.meta {
            obj.insert(k.to_string(), v.json());
        }
        serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON values are always serializable")
    }

    /// Metadata is not part of the CSV body; callers print it to stderr.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV input is UTF-8")
    }

    pub fn emit(&self, format: Format) {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        // a closed pipe is not an error worth reporting
        let _ = match format {
            Format::Json => writeln!(out, "{}", self.to_json()),
            Format::Csv => {
                for (k, v) in &self.meta {
                    eprintln!("# {k}: {}", v.csv());
                }
                write!(out, "{}", self.to_csv())
            }
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_formats() {
        let mut t = Table::new(&["x", "label", "ok"]);
        t.push(vec![0.1.into(), "a=(1,2)".into(), true.into()]);
        assert_eq!(t.to_csv(), "x,label,ok\n1.0000000000000001e-1,\"a=(1,2)\",true\n");
    }

    #[test]
    fn json_record_and_rows() {
        let r = Table::record(&["v"], vec![f64::NAN.into()]).meta("note", "x");
        assert_eq!(r.to_json(), "{\n  \"v\": null,\n  \"note\": \"x\"\n}");
        let mut t = Table::new(&["k"]);
        t.push(vec![3usize.into()]);
        assert!(t.to_json().contains("\"rows\""));
    }
}
