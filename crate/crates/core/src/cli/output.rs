//! Result tables in the common `observable,L,key,estimate,stderr,n_samples` schema.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const COLUMNS: [&str; 6] = ["observable", "L", "key", "estimate", "stderr", "n_samples"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub observable: String,
    #[serde(rename = "L")]
    pub size: u32,
    pub key: String,
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

impl ResultRow {
    pub fn new(observable: &str, size: u32, key: impl Into<String>, estimate: f64, stderr: f64, n: u64) -> Self {
        ResultRow { observable: observable.into(), size, key: key.into(), estimate, stderr, n_samples: n }
    }
}

/// Displacement key `z` as `x0;x1;...`.
pub fn z_key(z: &[i64]) -> String {
    z.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

pub fn parse_z_key(key: &str) -> Result<Vec<i64>> {
    key.split(';')
        .map(|s| s.parse::<i64>().map_err(|_| Error::param(format!("bad displacement key `{key}`"))))
        .collect()
}

pub fn rows_to_csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Reads a result table, naming any missing column.
pub fn read_rows(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    for c in COLUMNS {
        if !headers.iter().any(|h| h == c) {
            return Err(Error::MissingColumn { column: c.into(), path: path.display().to_string() });
        }
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Tracks the files written into an output directory; on failure a manifest lists
/// what was completed.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    complete: bool,
    files: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutputDir { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        fs::write(self.root.join(name), contents)?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_rows(&mut self, name: &str, rows: &[ResultRow]) -> Result<()> {
        let text = rows_to_csv_string(rows)?;
        self.write(name, &text)
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let text = serde_json::to_string_pretty(value)?;
        self.write(name, &(text + "\n"))
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    /// Writes `manifest.json`; best effort when recording a failure.
    pub fn finish(&self, error: Option<&Error>) -> Result<()> {
        let m = Manifest { complete: error.is_none(), files: &self.written, error: error.map(|e| e.to_string()) };
        let text = serde_json::to_string_pretty(&m)?;
        fs::write(self.root.join("manifest.json"), text + "\n")?;
        Ok(())
    }
}
