//! Column tables and their CSV/JSON encodings.

use std::io::{Read, Write};

use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Float(Vec<f64>),
    Int(Vec<i64>),
    Text(Vec<String>),
}

impl Column {
    fn len(&self) -> usize {
        match self {
            Column::Float(v) => v.len(),
            Column::Int(v) => v.len(),
            Column::Text(v) => v.len(),
        }
    }

    fn cell(&self, i: usize) -> String {
        match self {
            Column::Float(v) => format_float(v[i]),
            Column::Int(v) => v[i].to_string(),
            Column::Text(v) => v[i].clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Column::Float(v) => v.iter().map(|&x| float_json(x)).collect(),
            Column::Int(v) => v.iter().map(|&x| Value::from(x)).collect(),
            Column::Text(v) => v.iter().map(|x| Value::from(x.as_str())).collect(),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Finite values as numbers, others as the strings `NaN`, `inf`, `-inf`.
pub fn float_json(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else {
        Value::from(v.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    names: Vec<String>,
    columns: Vec<Column>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(mut self, name: &str, col: Column) -> Self {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.len(), col.len(), "column {name} has the wrong length");
        }
        self.names.push(name.to_string());
        self.columns.push(col);
        self
    }

    pub fn float(self, name: &str, v: Vec<f64>) -> Self {
        self.push(name, Column::Float(v))
    }

    pub fn int(self, name: &str, v: Vec<i64>) -> Self {
        self.push(name, Column::Int(v))
    }

    pub fn text(self, name: &str, v: Vec<String>) -> Self {
        self.push(name, Column::Text(v))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.columns[i])
    }

    pub fn floats(&self, name: &str) -> Result<&[f64]> {
        match self.column(name) {
            Some(Column::Float(v)) => Ok(v),
            Some(_) => Err(Error::Parse(format!("column '{name}' is not numeric"))),
            None => Err(Error::Parse(format!("missing column '{name}'"))),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(b',')
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.names).map_err(csv_err)?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| c.cell(i)))
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Column arrays keyed by name, plus `meta` with the column order added.
    pub fn to_json(&self, meta: Value) -> Value {
        let mut doc = Map::new();
        for (name, col) in self.names.iter().zip(&self.columns) {
            doc.insert(name.clone(), col.to_json());
        }
        let mut meta = match meta {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("info".into(), other);
                m
            }
        };
        meta.insert(
            "columns".into(),
            self.names.iter().map(|n| Value::from(n.as_str())).collect(),
        );
        doc.insert("meta".into(), Value::Object(meta));
        Value::Object(doc)
    }

    /// Reads a CSV written by [`Table::write_csv`]. Columns whose cells all
    /// parse as numbers become float columns, the rest text.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(input);
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        let names: Vec<String> = r
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(String::from)
            .collect();
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); names.len()];
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            for (col, v) in cells.iter_mut().zip(rec.iter()) {
                col.push(v.to_string());
            }
        }
        let mut table = Table::new();
        for (name, col) in names.iter().zip(cells) {
            let parsed: std::result::Result<Vec<f64>, _> =
                col.iter().map(|s| s.parse::<f64>()).collect();
            table = match parsed {
                Ok(v) => table.float(name, v),
                Err(_) => table.text(name, col),
            };
        }
        Ok(table)
    }

    /// Reads the JSON layout of [`Table::to_json`], in the order listed in
    /// `meta.columns`. Returns the table and the `meta` object.
    pub fn from_json(doc: &Value) -> Result<(Self, Value)> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::Parse("top level is not an object".into()))?;
        let meta = obj.get("meta").cloned().unwrap_or(Value::Null);
        let order: Vec<String> = meta
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("meta.columns missing".into()))?
            .iter()
            .filter_map(|v| v.as_str().map(String::from))
            .collect();
        let mut table = Table::new();
        for name in &order {
            let arr = obj
                .get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing column '{name}'")))?;
            let floats: Option<Vec<f64>> = arr
                .iter()
                .map(|v| {
                    v.as_f64()
                        .or_else(|| v.as_str().and_then(|s| s.parse().ok()))
                })
                .collect();
            table = match floats {
                Some(v) => table.float(name, v),
                None => table.text(
                    name,
                    arr.iter()
                        .map(|v| v.as_str().unwrap_or_default().to_string())
                        .collect(),
                ),
            };
        }
        Ok((table, meta))
    }
}
