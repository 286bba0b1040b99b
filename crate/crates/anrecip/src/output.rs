//! Output staging. Files are collected in memory and only written once the
//! command has succeeded; each is written to a temporary name and renamed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{Map, Value};

pub const SUMMARY_FILE: &str = "run.json";

pub struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
    summary: Map<String, Value>,
}

impl Outputs {
    pub fn new(dir: &Path, command: &str) -> Self {
        let mut summary = Map::new();
        summary.insert("tool".into(), "anrecip".into());
        summary.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        summary.insert("command".into(), command.into());
        Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            summary,
        }
    }

    pub fn add(&mut self, name: &str, content: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), content.into()));
    }

    /// Top-level summary entry (`inputs`, `parameters`, `results`, ...).
    pub fn record(&mut self, key: &str, value: Value) {
        self.summary.insert(key.into(), value);
    }

    /// Writes all staged files plus the run summary. On failure, files already
    /// renamed into place by this call are removed again.
    pub fn commit(mut self) -> Result<Vec<PathBuf>> {
        let names: Vec<Value> = self.files.iter().map(|(n, _)| n.clone().into()).collect();
        self.summary.insert("outputs".into(), names.into());
        let json = serde_json::to_string_pretty(&Value::Object(self.summary.clone()))? + "\n";
        self.files.push((SUMMARY_FILE.into(), json.into_bytes()));

        fs::create_dir_all(&self.dir)
            .with_context(|| format!("cannot create {}", self.dir.display()))?;
        let mut done = Vec::new();
        for (name, bytes) in &self.files {
            let target = self.dir.join(name);
            let tmp = self.dir.join(format!(".{name}.tmp"));
            let res = fs::write(&tmp, bytes)
                .and_then(|_| fs::rename(&tmp, &target))
                .with_context(|| format!("cannot write {}", target.display()));
            if let Err(e) = res {
                let _ = fs::remove_file(&tmp);
                for p in &done {
                    let _ = fs::remove_file(p);
                }
                return Err(e);
            }
            done.push(target);
        }
        Ok(done)
    }
}

/// Builds CSV text from a header and rows of preformatted cells.
pub struct CsvText {
    buf: String,
}

impl CsvText {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        CsvText { buf }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for c in cells {
            if !first {
                self.buf.push(',');
            }
            first = false;
            let c = c.as_ref();
            if c.contains([',', '"', '\n']) {
                self.buf.push('"');
                self.buf.push_str(&c.replace('"', "\"\""));
                self.buf.push('"');
            } else {
                self.buf.push_str(c);
            }
        }
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}
