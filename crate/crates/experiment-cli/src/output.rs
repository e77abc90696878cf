//! JSON and CSV writers. Every document carries `schema_version` and the
//! SHA-256 digests of its inputs; every CSV row starts with both.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::OutputFormat;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Hard and soft check failures; decides the exit code.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Verdicts {
    pub hard_failures: Vec<String>,
    pub soft_failures: Vec<String>,
}

impl Verdicts {
    pub fn hard(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.hard_failures.push(msg.into());
        }
    }

    pub fn soft(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.soft_failures.push(msg.into());
        }
    }

    /// 0 when everything passed, 2 for soft failures only, 1 for any hard failure.
    pub fn exit_code(&self) -> i32 {
        if !self.hard_failures.is_empty() {
            1
        } else if !self.soft_failures.is_empty() {
            2
        } else {
            0
        }
    }
}

/// Top-level JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct Document<'a, B: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub input_digests: &'a BTreeMap<String, String>,
    #[serde(flatten)]
    pub body: &'a B,
    pub verdicts: &'a Verdicts,
    pub exit_code: i32,
}

pub fn json_bytes<B: Serialize>(
    command: &str,
    digests: &BTreeMap<String, String>,
    body: &B,
    verdicts: &Verdicts,
) -> Result<Vec<u8>> {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        command,
        input_digests: digests,
        body,
        verdicts,
        exit_code: verdicts.exit_code(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Flat rows with `schema_version` and `input_sha256` prepended to every line.
pub fn csv_bytes<R: Serialize>(rows: &[R], input_sha256: &str) -> Result<Vec<u8>> {
    let mut wtr = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for r in rows {
        wtr.serialize(r)?;
    }
    let body = String::from_utf8(wtr.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8");
    let mut out = String::new();
    for (i, line) in body.lines().enumerate() {
        if i == 0 {
            out.push_str("schema_version,input_sha256,");
        } else {
            out.push_str(&format!("{SCHEMA_VERSION},{input_sha256},"));
        }
        out.push_str(line);
        out.push('\n');
    }
    Ok(out.into_bytes())
}

/// Target files for a base path and format.
pub fn output_paths(base: &Path, format: OutputFormat) -> (Option<PathBuf>, Option<PathBuf>) {
    let json = matches!(format, OutputFormat::Json | OutputFormat::Both).then(|| base.with_extension("json"));
    let csv = matches!(format, OutputFormat::Csv | OutputFormat::Both).then(|| base.with_extension("csv"));
    (json, csv)
}

/// Writes the documents, creating parent directories.
pub fn write_outputs(
    base: &Path,
    format: OutputFormat,
    json: &[u8],
    csv: &[u8],
) -> Result<Vec<PathBuf>> {
    let (jp, cp) = output_paths(base, format);
    let mut written = Vec::new();
    for (path, bytes) in [(jp, json), (cp, csv)] {
        if let Some(path) = path {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, bytes)?;
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: u32,
        b: Option<f64>,
        c: String,
    }

    #[test]
    fn csv_rows_carry_version_and_digest() {
        let rows = [Row { a: 1, b: None, c: "x, y".into() }, Row { a: 2, b: Some(0.5), c: "z".into() }];
        let text = String::from_utf8(csv_bytes(&rows, "abc").unwrap()).unwrap();
        assert_eq!(text, "schema_version,input_sha256,a,b,c\n1,abc,1,,\"x, y\"\n1,abc,2,0.5,z\n");
    }

    #[test]
    fn exit_codes() {
        let mut v = Verdicts::default();
        assert_eq!(v.exit_code(), 0);
        v.soft(false, "trend");
        assert_eq!(v.exit_code(), 2);
        v.hard(false, "invariant");
        assert_eq!(v.exit_code(), 1);
    }
}
