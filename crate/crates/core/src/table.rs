//! Tables written by the command-line driver: CSV with `# key=value`
//! metadata lines, or a JSON mirror with one object per row.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{domain, Result};
use crate::series::FieldSnapshot;

/// Columns of every field table.
pub const FIELD_COLUMNS: [&str; 11] =
    ["geometry", "method", "eps", "n_roots_or_cells", "x", "tau", "u", "v", "du_dx", "dv_dx", "tol"];

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => json!(i),
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => Value::String(format!("{x}")),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchmarkTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl BenchmarkTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { metadata: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn fields() -> Self {
        Self::new(&FIELD_COLUMNS)
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return domain(format!("row has {} cells, table has {} columns", row.len(), self.columns.len()));
        }
        if row.iter().any(|c| matches!(c, Cell::Text(s) if s.contains([',', '\n']))) {
            return domain("text cells may not contain commas or newlines");
        }
        self.rows.push(row);
        Ok(())
    }

    /// Appends one row per grid point of a field snapshot.
    pub fn push_snapshot(&mut self, geometry: &str, method: &str, eps: f64, count: usize, snap: &FieldSnapshot) -> Result<()> {
        for i in 0..snap.x.len() {
            let tol = snap.tol.get(i).map_or(Cell::Empty, |&t| Cell::Num(t));
            self.push(vec![
                geometry.into(),
                method.into(),
                eps.into(),
                count.into(),
                snap.x[i].into(),
                snap.tau.into(),
                snap.u[i].into(),
                snap.v[i].into(),
                snap.du_dx[i].into(),
                snap.dv_dx[i].into(),
                tol,
            ])?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let metadata: Map<String, Value> =
            self.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect()))
            .collect();
        let mut text = serde_json::to_string_pretty(&json!({ "metadata": metadata, "rows": rows }))
            .expect("table values are always serializable");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes atomically: a temporary sibling is renamed over `path`.
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        let mut tmp = PathBuf::from(path);
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        tmp.set_file_name(format!(".{name}.tmp"));
        fs::write(&tmp, self.render(format))?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> BenchmarkTable {
        let mut t = BenchmarkTable::new(&["method", "n", "value", "tol"]);
        t.meta("eps", 0.1);
        t.push(vec!["series".into(), 3usize.into(), 0.1.into(), Cell::Empty]).unwrap();
        t
    }

    #[test]
    fn csv_layout() {
        let csv = table().to_csv();
        assert_eq!(csv, "# eps=0.1\nmethod,n,value,tol\nseries,3,1.0000000000000001e-1,\n");
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            let text = Cell::Num(x).csv();
            assert_eq!(text.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_mirrors_rows() {
        let v: Value = serde_json::from_str(&table().to_json()).unwrap();
        assert_eq!(v["metadata"]["eps"], "0.1");
        assert_eq!(v["rows"][0]["n"], 3);
        assert_eq!(v["rows"][0]["value"], 0.1);
        assert!(v["rows"][0]["tol"].is_null());
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let mut t = table();
        assert!(t.push(vec!["a".into()]).is_err());
        assert!(t.push(vec!["a,b".into(), 1usize.into(), 0.0.into(), Cell::Empty]).is_err());
    }

    #[test]
    fn write_is_atomic_and_repeatable() {
        let dir = std::env::temp_dir().join(format!("marshak-table-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        table().write(&path, Format::Csv).unwrap();
        let first = fs::read(&path).unwrap();
        table().write(&path, Format::Csv).unwrap();
        assert_eq!(first, fs::read(&path).unwrap());
        assert!(!dir.join(".t.csv.tmp").exists());
        fs::remove_dir_all(&dir).unwrap();
    }
}
