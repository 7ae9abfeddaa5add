//! One CSV row per (instance, method) run.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Written into the `version` column of every row.
pub const RECORD_VERSION: u32 = 1;

/// Column order of the CSV header.
pub const COLUMNS: [&str; 16] = [
    "version",
    "instance",
    "n",
    "m",
    "ell",
    "method",
    "status",
    "objective",
    "lower_bound",
    "gap",
    "wall_secs",
    "seed",
    "nodes",
    "rounds",
    "constraints_added",
    "error",
];

/// Empty optional fields are written as empty cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: u32,
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub ell: Option<f64>,
    pub method: String,
    pub status: String,
    pub objective: Option<f64>,
    pub lower_bound: Option<f64>,
    pub gap: Option<f64>,
    /// Only filled when timing was requested.
    pub wall_secs: Option<f64>,
    pub seed: Option<u64>,
    pub nodes: u64,
    pub rounds: u64,
    pub constraints_added: u64,
    pub error: Option<String>,
}

impl RunRecord {
    pub fn new(instance: &str, n: usize, m: usize, method: &str) -> Self {
        RunRecord {
            version: RECORD_VERSION,
            instance: instance.to_string(),
            n,
            m,
            ell: None,
            method: method.to_string(),
            status: String::new(),
            objective: None,
            lower_bound: None,
            gap: None,
            wall_secs: None,
            seed: None,
            nodes: 0,
            rounds: 0,
            constraints_added: 0,
            error: None,
        }
    }
}

pub fn write_records<W: Write>(out: W, records: &[RunRecord], header: bool) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(header).from_writer(out);
    if records.is_empty() && header {
        w.write_record(COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(records: &[RunRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records, true).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn parse_csv(text: &str) -> csv::Result<Vec<RunRecord>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

/// Appends rows, writing the header first when the file is new or empty.
pub fn append_records(path: &Path, records: &[RunRecord]) -> io::Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    write_records(file, records, fresh).map_err(io::Error::other)
}
