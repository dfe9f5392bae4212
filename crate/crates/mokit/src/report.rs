//! Reports and their JSON / CSV forms.
//!
//! JSON objects have sorted keys and numbers use the shortest round-trip
//! representation, so equal reports serialize to identical bytes. Infinite
//! values are written as the string `"inf"`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use mokit_core::ExtReal;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// JSON value of a float; non-finite values become strings.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v == f64::INFINITY {
        json!("inf")
    } else if v == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!("nan")
    }
}

pub fn ext(v: ExtReal) -> Value {
    num(v.value())
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Assertion { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        json!({ "columns": self.columns, "rows": self.rows })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub task: String,
    pub seed: u64,
    /// Everything needed to run the scenario again.
    pub scenario: Value,
    pub results: Value,
    pub tables: Vec<Table>,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> Value {
        let tables: Map<String, Value> = self.tables.iter().map(|t| (t.name.clone(), t.to_json())).collect();
        json!({
            "version": mokit_core::VERSION,
            "rng": mokit_core::rng::ALGORITHM,
            "task": self.task,
            "seed": self.seed,
            "scenario": self.scenario,
            "results": self.results,
            "tables": tables,
            "assertions": self.assertions,
            "passed": self.passed(),
        })
    }

    pub fn json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }

    /// `key,value` rows for every scalar of the report except the tables;
    /// keys are dotted JSON paths.
    pub fn summary_csv(&self) -> String {
        let mut doc = self.to_json();
        if let Value::Object(m) = &mut doc {
            m.remove("tables");
        }
        let mut rows = Vec::new();
        flatten("", &doc, &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"]).expect("in-memory write");
        for (k, v) in rows {
            w.write_record([k, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }

    pub fn table_csv(table: &Table) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.columns).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row.iter().map(scalar)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes the report into `dir` and returns the paths written.
///
/// `json` writes `<task>.json`; `csv` writes `<task>.csv` with the summary
/// and `<task>.<table>.csv` per table.
pub fn emit(report: &Report, format: Format, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    match format {
        Format::Json => put(format!("{}.json", report.task), report.json_string())?,
        Format::Csv => {
            put(format!("{}.csv", report.task), report.summary_csv())?;
            for t in &report.tables {
                put(format!("{}.{}.csv", report.task, t.name), Report::table_csv(t))?;
            }
        }
    }
    Ok(written)
}
