use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A command's result, renderable as CSV (with optional `#` preamble lines)
/// or as JSON.
pub struct Report {
    pub preamble: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Report {
    pub fn new(header: &[&'static str], json: Value) -> Self {
        Report { preamble: Vec::new(), header: header.to_vec(), rows: Vec::new(), json }
    }

    pub fn render(&self, format: Format) -> io::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut out = Vec::new();
                for line in &self.preamble {
                    writeln!(out, "# {line}")?;
                }
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
                drop(w);
                Ok(out)
            }
        }
    }
}

/// Writes to `out`, or to stdout when absent.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}

pub fn pass_fail(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

/// 1-based ids joined by spaces.
pub fn ids(v: &[usize]) -> String {
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}
