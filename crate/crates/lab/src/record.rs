//! Run records and their versioned CSV format.
//!
//! A file starts with the line `# lab-runrecord v1`, then a header row, then
//! one row per run. `wall_ms` is the only timing column.

use std::fs;
use std::io::Write;
use std::path::Path;

use kfactor::bounds::BoundCheck;
use serde::{Deserialize, Serialize};

use crate::error::LabError;

pub const SCHEMA_LINE: &str = "# lab-runrecord v1";

pub const COLUMNS: [&str; 14] = [
    "command",
    "spec",
    "input",
    "seed",
    "trial",
    "outcome",
    "certificate",
    "cliques",
    "nodes",
    "checks_total",
    "checks_held",
    "checks_vacuous",
    "bound_checks",
    "wall_ms",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    /// JSON echo of the parsed arguments; enough to re-run.
    pub spec: String,
    pub input: String,
    pub seed: Option<u64>,
    pub trial: Option<usize>,
    pub outcome: String,
    pub certificate: String,
    pub cliques: Option<u64>,
    pub nodes: Option<u64>,
    pub checks_total: usize,
    pub checks_held: usize,
    pub checks_vacuous: usize,
    /// JSON array of bound checks.
    pub bound_checks: String,
    pub wall_ms: f64,
}

impl RunRecord {
    pub fn new(command: &str, spec: String, outcome: &str) -> Self {
        RunRecord {
            command: command.to_string(),
            spec,
            input: String::new(),
            seed: None,
            trial: None,
            outcome: outcome.to_string(),
            certificate: String::new(),
            cliques: None,
            nodes: None,
            checks_total: 0,
            checks_held: 0,
            checks_vacuous: 0,
            bound_checks: "[]".to_string(),
            wall_ms: 0.0,
        }
    }

    pub fn with_checks(mut self, checks: &[BoundCheck]) -> Self {
        self.checks_total = checks.len();
        self.checks_held = checks.iter().filter(|c| c.holds).count();
        self.checks_vacuous = checks.iter().filter(|c| c.vacuous).count();
        self.bound_checks = serde_json::to_string(checks).expect("bound checks serialize");
        self
    }
}

fn to_csv(records: &[RunRecord], header: bool) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(header).from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("record serializes");
    }
    if header && records.is_empty() {
        w.write_record(COLUMNS).expect("header writes");
    }
    w.into_inner().expect("in-memory writer")
}

/// The full text of a record file.
pub fn render(records: &[RunRecord]) -> Vec<u8> {
    let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
    out.extend(to_csv(records, true));
    out
}

pub fn write_records(path: &Path, records: &[RunRecord]) -> Result<(), LabError> {
    fs::write(path, render(records)).map_err(|e| LabError::io(path, e))
}

/// Appends to an existing record file, creating it (with header) if absent.
pub fn append_records(path: &Path, records: &[RunRecord]) -> Result<(), LabError> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    if fresh {
        return write_records(path, records);
    }
    check_schema(path, &fs::read_to_string(path).map_err(|e| LabError::io(path, e))?)?;
    let mut f = fs::OpenOptions::new().append(true).open(path).map_err(|e| LabError::io(path, e))?;
    f.write_all(&to_csv(records, false)).map_err(|e| LabError::io(path, e))
}

fn check_schema(path: &Path, text: &str) -> Result<(), LabError> {
    let first = text.lines().next().unwrap_or("");
    if first != SCHEMA_LINE {
        return Err(LabError::input(path, format!("expected schema line '{SCHEMA_LINE}', found '{first}'")));
    }
    let header = text.lines().nth(1).unwrap_or("");
    let present: Vec<&str> = header.split(',').collect();
    if let Some(missing) = COLUMNS.iter().find(|c| !present.contains(c)) {
        return Err(LabError::input(path, format!("missing column '{missing}'")));
    }
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, LabError> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    check_schema(path, &text)?;
    let body = text.split_once('\n').map_or("", |(_, rest)| rest);
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut out = Vec::new();
    for (i, row) in reader.deserialize().enumerate() {
        out.push(row.map_err(|e| LabError::input(path, format!("row {}: {e}", i + 1)))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let mut a = RunRecord::new("solve", "{\"x\":1}".into(), "FACTOR");
        a.seed = Some(3);
        a.cliques = Some(12);
        let b = RunRecord::new("fuzz", "{}".into(), "NONE");
        append_records(&path, &[a.clone()]).unwrap();
        append_records(&path, &[b.clone()]).unwrap();
        assert_eq!(read_records(&path).unwrap(), vec![a, b]);
    }

    #[test]
    fn empty_file_has_header() {
        let text = String::from_utf8(render(&[])).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), COLUMNS.join(","));
    }

    #[test]
    fn missing_column_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, format!("{SCHEMA_LINE}\ncommand,spec\n")).unwrap();
        let err = read_records(&path).unwrap_err().to_string();
        assert!(err.contains("'input'"), "{err}");
        fs::write(&path, "command\n").unwrap();
        assert!(read_records(&path).unwrap_err().to_string().contains("schema line"));
    }
}
