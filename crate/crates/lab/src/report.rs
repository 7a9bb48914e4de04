//! Aggregation of run records by command.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cli::ReportArgs;
use crate::error::LabError;
use crate::record::{read_records, RunRecord};
use crate::RunOutput;

pub const SUMMARY_LINE: &str = "# lab-summary v1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub command: String,
    pub runs: usize,
    /// `OUTCOME=count` pairs joined by `;`, sorted by outcome.
    pub outcomes: String,
    pub checks_total: usize,
    pub checks_held: usize,
    /// `checks_held / checks_total`, empty when no checks ran.
    pub pass_rate: Option<f64>,
    pub wall_ms_p50: f64,
    pub wall_ms_p90: f64,
    pub wall_ms_max: f64,
}

/// Nearest-rank percentile of sorted values.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(&r.command).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(command, rs)| {
            let mut outcomes: BTreeMap<&str, usize> = BTreeMap::new();
            for r in &rs {
                *outcomes.entry(&r.outcome).or_default() += 1;
            }
            let checks_total: usize = rs.iter().map(|r| r.checks_total).sum();
            let checks_held: usize = rs.iter().map(|r| r.checks_held).sum();
            let mut wall: Vec<f64> = rs.iter().map(|r| r.wall_ms).collect();
            wall.sort_by(f64::total_cmp);
            SummaryRow {
                command: command.to_string(),
                runs: rs.len(),
                outcomes: outcomes.iter().map(|(o, c)| format!("{o}={c}")).collect::<Vec<_>>().join(";"),
                checks_total,
                checks_held,
                pass_rate: (checks_total > 0).then(|| checks_held as f64 / checks_total as f64),
                wall_ms_p50: percentile(&wall, 0.5),
                wall_ms_p90: percentile(&wall, 0.9),
                wall_ms_max: wall.last().copied().unwrap_or(0.0),
            }
        })
        .collect()
}

pub fn render_csv(rows: &[SummaryRow]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(format!("{SUMMARY_LINE}\n").into_bytes());
    if rows.is_empty() {
        w.write_record([
            "command",
            "runs",
            "outcomes",
            "checks_total",
            "checks_held",
            "pass_rate",
            "wall_ms_p50",
            "wall_ms_p90",
            "wall_ms_max",
        ])
        .expect("header writes");
    }
    for r in rows {
        w.serialize(r).expect("row serializes");
    }
    w.into_inner().expect("in-memory writer")
}

pub fn render_table(rows: &[SummaryRow]) -> String {
    if rows.is_empty() {
        return "no records\n".to_string();
    }
    let mut out = format!(
        "{:<10} {:>6} {:>10} {:>10} {:>10} {:>10}  {}\n",
        "command", "runs", "checks", "pass", "p50 ms", "p90 ms", "outcomes"
    );
    for r in rows {
        let pass = r.pass_rate.map(|p| format!("{:.1}%", 100.0 * p)).unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<10} {:>6} {:>10} {:>10} {:>10.1} {:>10.1}  {}\n",
            r.command,
            r.runs,
            format!("{}/{}", r.checks_held, r.checks_total),
            pass,
            r.wall_ms_p50,
            r.wall_ms_p90,
            r.outcomes
        ));
    }
    out
}

pub(crate) fn run(a: &ReportArgs) -> Result<RunOutput, LabError> {
    let mut records = Vec::new();
    for path in &a.inputs {
        records.extend(read_records(path)?);
    }
    let rows = summarize(&records);
    let mut out = RunOutput { text: render_table(&rows), ..RunOutput::default() };
    if let Some(path) = &a.output {
        out.file(path.clone(), render_csv(&rows));
    }
    Ok(out)
}
