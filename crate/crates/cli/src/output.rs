//! CSV tables and JSON sidecars.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render))?;
        }
        out.flush().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(())
    }

    /// To `path`, or stdout when absent.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => self.write_to(File::create(p).map_err(|e| CliError::io(p, e))?),
            None => self.write_to(io::stdout().lock()),
        }
    }
}

/// `out.csv` → `out.json`; a prefix without extension gets one appended.
pub fn sidecar_path(out: &Path, ext: &str) -> PathBuf {
    match out.extension() {
        Some(e) if e == "csv" => out.with_extension(ext),
        _ => {
            let mut s = out.as_os_str().to_owned();
            s.push(".");
            s.push(ext);
            PathBuf::from(s)
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            threads: rayon::current_num_threads(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_floats() {
        let mut t = Table::new(["x", "n", "class"]);
        t.push(vec![0.1.into(), 3usize.into(), "sign_flip".into()]);
        t.push(vec![f64::NAN.into(), (-1i64).into(), "chaotic".into()]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x,n,class\n1.0000000000000001e-1,3,sign_flip\nNaN,-1,chaotic\n");
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("a/b.csv"), "json"), PathBuf::from("a/b.json"));
        assert_eq!(sidecar_path(Path::new("a/win"), "bin"), PathBuf::from("a/win.bin"));
        assert_eq!(sidecar_path(Path::new("a/w.1"), "json"), PathBuf::from("a/w.1.json"));
    }
}
