//! Deterministic report rendering.
//!
//! Floats are written with 17 significant digits in scientific notation and
//! object keys are sorted, so identical runs give identical bytes.

use crate::failure::Failure;
use num_complex::Complex64;
use qmarkov::ComplexMatrix;
use serde_json::{Map, Number, Value};
use std::str::FromStr;

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float parses"))
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![float(z.re), float(z.im)])
}

pub fn complex_list(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

/// CSV-shaped part of a report.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn cell(x: f64) -> String {
    float(x).to_string()
}

#[derive(Debug, Default)]
pub struct Report {
    fields: Map<String, Value>,
    table: Option<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.set("command", Value::String(command.into()));
        r
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn set_table(&mut self, table: Table) {
        self.table = Some(table);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, Failure> {
        let table = self.table.as_ref().ok_or_else(|| {
            Failure::usage("this command has no tabular output; use --format json".into())
        })?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::io(e.to_string());
        w.write_record(&table.columns).map_err(io)?;
        for row in &table.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}
