use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{ExperimentConfig, Format};
use crate::error::{CliError, Result};

/// A named table of plot-ready rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<&'static str>) -> Self {
        Table {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Values of one column, `None` where the cell is not a number.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))?;
        }
        w.flush()?;
        Ok(())
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.clone()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Number cell; non-finite values become empty cells and `-0` prints as `0`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x + 0.0).map_or(Value::Null, Value::Number)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub struct OutputDir {
    root: PathBuf,
    format: Format,
}

impl OutputDir {
    /// Create the directory and write `config.json` into it.
    pub fn create(cfg: &ExperimentConfig) -> Result<Self> {
        fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
        let dir = OutputDir {
            root: cfg.out.clone(),
            format: cfg.format,
        };
        dir.write_json("config.json", cfg)?;
        Ok(dir)
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.root.join(file)
    }

    fn open(&self, file: &str) -> Result<BufWriter<fs::File>> {
        let path = self.path(file);
        fs::File::create(&path)
            .map(BufWriter::new)
            .map_err(|e| CliError::io(path, e))
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, file: &str, value: &T) -> Result<()> {
        let mut w = self.open(file)?;
        let path = self.path(file);
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(&path, e.into()))?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(&path, e))
    }

    /// `<name>.csv` or `<name>.json` depending on the configured format.
    pub fn write_table(&self, table: &Table) -> Result<PathBuf> {
        match self.format {
            Format::Csv => {
                let file = format!("{}.csv", table.name);
                let path = self.path(&file);
                table
                    .write_csv(self.open(&file)?)
                    .map_err(|e| CliError::io(&path, e.into()))?;
                Ok(path)
            }
            Format::Json => {
                let file = format!("{}.json", table.name);
                self.write_json(&file, &table.to_json())?;
                Ok(self.path(&file))
            }
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}
